"""finsemi: finite semigroups, pseudovarieties, Mal'cev products via
semilocal congruences, the window calculus for semidirect products with
D_k, and left basic factorizations, with a corpus-level verification
harness."""

from . import (  # noqa: F401
    corpus,
    dk,
    factorization,
    languages,
    malcev,
    pseudovarieties,
    semigroups,
    suites,
    terms,
)

__all__ = [
    "corpus", "dk", "factorization", "languages", "malcev",
    "pseudovarieties", "semigroups", "suites", "terms",
]
