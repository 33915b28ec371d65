#pragma once

#include "iotrisk/asset_model.hpp"
#include "iotrisk/errors.hpp"
#include "iotrisk/micromort.hpp"
#include "iotrisk/render.hpp"
#include "iotrisk/risk_model.hpp"
#include "iotrisk/rng.hpp"
#include "iotrisk/scenario.hpp"
#include "iotrisk/var_engine.hpp"
#include "iotrisk/version.hpp"
