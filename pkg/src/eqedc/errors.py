"""Exception types shared across the package."""


class EqedcError(Exception):
    """Base class for all package errors."""


class SupportTooLarge(EqedcError):
    """Dense norm evaluation requested beyond the dense-size cap."""


class NonConvergence(EqedcError):
    """Power iteration failed to certify its residual within the iteration cap."""


class OddParity(EqedcError):
    """An odd fermionic monomial appeared where charge-parity-even input is required."""


class IndexOrderViolation(EqedcError):
    """Four-operator case expansion requires strictly ordered indices j > k > l."""


class SingularDenominator(EqedcError):
    """Zero four-momentum-transfer pole in a scattering amplitude."""


class ConfigInvalid(EqedcError):
    """Nonsensical builder configuration (nonpositive lengths, cutoffs, ...)."""


class MissingPotential(EqedcError):
    """External-potential build requested without a potential configured."""


class OddLattice(EqedcError):
    """The nonlocal kinetic build requires an even number of sites per dimension."""


class OddOrder(EqedcError):
    """Product-formula order must be an even integer >= 2."""


class MalformedPair(EqedcError):
    """One-body circuit template got a pair that does not share support/string."""


class WrongArity(EqedcError):
    """Wrong number of qubits passed to a fixed-arity circuit template."""


class NonHermitian(EqedcError):
    """Operation requires a Hermitian operator."""


class TooLarge(EqedcError):
    """Dense oracle size cap exceeded."""


class PhaseWrap(EqedcError):
    """Phase estimation precondition t*(||H|| + eps) <= pi violated."""


class NonIsometry(EqedcError):
    """Slater coefficient matrix rows are not orthonormal."""


class SupercriticalZ(EqedcError):
    """Z alpha beyond the hydrogenic Dirac bound-state domain (j + 1/2)."""
