#pragma once

#include "secretary/adversaries.hpp"
#include "secretary/bounds.hpp"
#include "secretary/combinatorics.hpp"
#include "secretary/core.hpp"
#include "secretary/enumeration.hpp"
#include "secretary/montecarlo.hpp"
#include "secretary/oracle.hpp"
#include "secretary/policies.hpp"
#include "secretary/random.hpp"
