"""Cached shipped data and torsion results shared by the test modules."""
from functools import lru_cache

from torsor.io import shipped_complex, shipped_local_system
from torsor.localsys import adjoint_rep_pgsp4, pullback_local_system, sl2_irrep
from torsor.torsion import adjoint_torsion, assemble_twisted, default_orientation, torsion

ACCEPTANCE_LINES: dict[int, str] = {}


@lru_cache(maxsize=None)
def figure_eight():
    return shipped_complex()


@lru_cache(maxsize=None)
def system(name):
    return shipped_local_system(name)


@lru_cache(maxsize=None)
def adjoint_result(name):
    return adjoint_torsion(figure_eight(), system(name))


@lru_cache(maxsize=None)
def adjoint_complex(name):
    return assemble_twisted(figure_eight(), system(name), adjoint_rep_pgsp4())


@lru_cache(maxsize=None)
def irrep_result(n):
    c = figure_eight()
    return torsion(assemble_twisted(c, system("geom"), sl2_irrep(n)), orientation=default_orientation(c))


@lru_cache(maxsize=None)
def adjoint_system(name):
    return pullback_local_system(system(name), adjoint_rep_pgsp4())
