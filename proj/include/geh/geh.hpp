#pragma once

#include "geh/correlations.hpp"
#include "geh/distribution.hpp"
#include "geh/errors.hpp"
#include "geh/multiplicative.hpp"
#include "geh/sieve.hpp"
#include "geh/summation.hpp"
