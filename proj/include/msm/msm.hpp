#pragma once

// Umbrella header. Individual headers can be included on their own; this
// one pulls in the whole library for tools and quick experiments.

#include "msm/errors.hpp"
#include "msm/rational.hpp"
#include "msm/field.hpp"
#include "msm/number_field.hpp"

#include "msm/series.hpp"
#include "msm/order.hpp"
#include "msm/euler.hpp"

#include "msm/perturbed_polynomial.hpp"
#include "msm/root_expansion.hpp"

#include "msm/runge_kutta.hpp"
#include "msm/ode_models.hpp"

#include "msm/fft.hpp"
#include "msm/dispersion.hpp"
#include "msm/envelope.hpp"
#include "msm/wave_reference.hpp"
#include "msm/split_step.hpp"
#include "msm/nls.hpp"

#include "msm/susceptibility.hpp"
#include "msm/optical_dispersion.hpp"
#include "msm/optics_coefficients.hpp"
#include "msm/kerr_envelope.hpp"
#include "msm/ade_reference.hpp"

#include "msm/csv.hpp"
#include "msm/config.hpp"
#include "msm/scenarios.hpp"
