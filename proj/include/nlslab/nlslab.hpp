#pragma once

// Pseudospectral toolkit for defocusing mass-subcritical NLS scattering
// experiments: periodic spectral calculus, split-step propagators for the
// physical / pseudo-conformal / lens evolutions, the change-of-variable maps
// between them, and the scattering diagnostics built on top.

#include "nlslab/analysis.hpp"
#include "nlslab/config.hpp"
#include "nlslab/diagnostics.hpp"
#include "nlslab/errors.hpp"
#include "nlslab/exponents.hpp"
#include "nlslab/field.hpp"
#include "nlslab/field_io.hpp"
#include "nlslab/grid.hpp"
#include "nlslab/initial_data.hpp"
#include "nlslab/manifest.hpp"
#include "nlslab/propagators.hpp"
#include "nlslab/scenario.hpp"
#include "nlslab/transforms.hpp"
#include "nlslab/version.hpp"
