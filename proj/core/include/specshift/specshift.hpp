#pragma once

#include "specshift/commuting.hpp"
#include "specshift/construct.hpp"
#include "specshift/error.hpp"
#include "specshift/funlib.hpp"
#include "specshift/json_io.hpp"
#include "specshift/loewner.hpp"
#include "specshift/multiplicity.hpp"
#include "specshift/opcalc.hpp"
#include "specshift/random.hpp"
