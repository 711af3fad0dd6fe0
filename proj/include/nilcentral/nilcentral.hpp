#pragma once

#include "nilcentral/analyzer.hpp"
#include "nilcentral/error.hpp"
#include "nilcentral/field.hpp"
#include "nilcentral/identities.hpp"
#include "nilcentral/json_io.hpp"
#include "nilcentral/linsolve.hpp"
#include "nilcentral/maps.hpp"
#include "nilcentral/matrix.hpp"
#include "nilcentral/rng.hpp"
#include "nilcentral/version.hpp"
