#pragma once

#include "liouville_lab/branch.hpp"
#include "liouville_lab/bubble.hpp"
#include "liouville_lab/config.hpp"
#include "liouville_lab/fourier.hpp"
#include "liouville_lab/interaction.hpp"
#include "liouville_lab/kernels.hpp"
#include "liouville_lab/layer.hpp"
#include "liouville_lab/maxima.hpp"
#include "liouville_lab/numerics.hpp"
#include "liouville_lab/ode.hpp"
#include "liouville_lab/pohozaev.hpp"
#include "liouville_lab/quadrature.hpp"
#include "liouville_lab/radial_profile.hpp"
#include "liouville_lab/report.hpp"
#include "liouville_lab/scenarios.hpp"
