"""ncalc: noncommutative integration and differentiation on finite models.

Subpackages cover scalar Young-function calculus (:mod:`ncalc.young`),
finite traced *-algebras (:mod:`ncalc.matrixalg`), tracial Lp/Orlicz norms
and entropy functionals (:mod:`ncalc.ncnorms`), the discretized crossed
product with its dual action (:mod:`ncalc.crossed`), lattice Klein-Gordon
propagators and CCR/Weyl algebras (:mod:`ncalc.kleingordon`,
:mod:`ncalc.weyl`), translation flows with derivations
(:mod:`ncalc.flows`), and derivation-based differential forms
(:mod:`ncalc.forms`).
"""

__version__ = "0.1.0"
