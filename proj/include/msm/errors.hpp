#pragma once

#include <stdexcept>
#include <string>

namespace msm {

// Base type for everything the library throws on purpose. Numerical
// failures are not assertions: callers are expected to catch these and
// report them, so each failure mode gets its own type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid argument values (bad exponent, empty polynomial, eps out of range).
class DomainError : public Error {
public:
    using Error::Error;
};

// Requested order/index outside what a series object stores.
class IndexError : public Error {
public:
    using Error::Error;
};

// Result would exceed the exactly representable range (factorials past 20).
class OverflowError : public Error {
public:
    using Error::Error;
};

// Violated setup requirement (grid too coarse, time step above a CFL cap).
class PreconditionError : public Error {
public:
    using Error::Error;
};

// The eps=0 polynomial has no real roots.
class NoRoots : public Error {
public:
    using Error::Error;
};

// Linear operator of the perturbation hierarchy vanished at the base root;
// the regular expansion does not exist and a rescaling is needed.
class SingularHierarchy : public Error {
public:
    using Error::Error;
};

// Iterative root refinement ran out of iterations.
class ConvergenceFailure : public Error {
public:
    using Error::Error;
};

// Adaptive ODE integrator drove the step size below its floor.
class StiffnessFailure : public Error {
public:
    using Error::Error;
};

// Trajectory norm blew past the divergence guard.
class DivergenceFailure : public Error {
public:
    using Error::Error;
};

// Newton fit of envelope initial conditions failed to reach tolerance.
class FitFailure : public Error {
public:
    using Error::Error;
};

// Dispersion-branch continuation lost the branch.
class BranchFailure : public Error {
public:
    using Error::Error;
};

// Benchmark could not locate a step size meeting the accuracy target.
class BenchFailure : public Error {
public:
    using Error::Error;
};

// Malformed or inconsistent experiment configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace msm
