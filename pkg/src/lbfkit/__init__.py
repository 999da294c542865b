"""lbfkit: verification toolkit for Lefschetz-Bott fibration computations.

Subpackages:

* ``exterior``  -- symbolic exterior calculus engine (exact rationals)
* ``models``    -- named model forms and the identity checks over them
* ``transport`` -- parallel-transport ODE, closed forms, monodromy profiles
* ``mcg``       -- Dehn-twist word calculus on fibered boundaries
* ``topo``      -- Euler-characteristic bookkeeping for fillings
* ``blowup``    -- exact polynomial blow-ups resolving A_k singularities
* ``contact``   -- contact profile functions and corner smoothing
* ``cli``       -- the ``lbfkit`` command-line entry point
"""

__version__ = "0.1.0"
