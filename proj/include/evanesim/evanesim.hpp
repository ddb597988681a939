#pragma once

#include "evanesim/detection.hpp"
#include "evanesim/errors.hpp"
#include "evanesim/layered.hpp"
#include "evanesim/pulse.hpp"
#include "evanesim/runner.hpp"
#include "evanesim/scenario.hpp"
#include "evanesim/units.hpp"
