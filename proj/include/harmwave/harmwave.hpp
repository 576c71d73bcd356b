#pragma once

// Closed-form dynamics of a position-momentum-correlated Gaussian wavepacket
// in a static harmonic trap, with an independent propagator-quadrature
// oracle, phase-space (covariance/Wigner) machinery, Fisher-information
// estimators, and figure-dataset emission.

#include "harmwave/core.hpp"
#include "harmwave/dataset.hpp"
#include "harmwave/dynamics.hpp"
#include "harmwave/errors.hpp"
#include "harmwave/estimation.hpp"
#include "harmwave/oracle.hpp"
#include "harmwave/phase_space.hpp"
#include "harmwave/quadrature.hpp"
#include "harmwave/scenario.hpp"
