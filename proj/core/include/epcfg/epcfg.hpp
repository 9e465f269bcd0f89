#pragma once

// Umbrella header.

#include "epcfg/config.hpp"
#include "epcfg/errors.hpp"
#include "epcfg/experiment.hpp"
#include "epcfg/guidance.hpp"
#include "epcfg/latent.hpp"
#include "epcfg/latent_io.hpp"
#include "epcfg/metrics.hpp"
#include "epcfg/mixture.hpp"
#include "epcfg/report.hpp"
#include "epcfg/rng.hpp"
#include "epcfg/sampler.hpp"
#include "epcfg/schedule.hpp"
