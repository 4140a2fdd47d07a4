"""Python access to the beamhop pattern optimiser."""

try:
    from . import _beamhop as _core
except ImportError:  # build tree: the extension sits on sys.path, not inside the package
    import _beamhop as _core

Error = _core.Error
ParseError = _core.ParseError
ValidationError = _core.ValidationError
InfeasibleError = _core.InfeasibleError
DomainError = _core.DomainError
SizeError = _core.SizeError
SingularError = _core.SingularError
InternalError = _core.InternalError

Scenario = _core.Scenario
Pattern = _core.Pattern
generate = _core.generate
success_lower_bound = _core.success_lower_bound
optimize = _core.optimize
bisect = _core.bisect
simulate = _core.simulate
solve_sylvester = _core.solve_sylvester
collision_avoidance = _core.collision_avoidance

__all__ = [name for name in dir() if not name.startswith("_")]
