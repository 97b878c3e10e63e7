#pragma once

#include "qsl/complex2x2.hpp"
#include "qsl/constants.hpp"
#include "qsl/io.hpp"
#include "qsl/model.hpp"
#include "qsl/propagator.hpp"
#include "qsl/pulse.hpp"
#include "qsl/search.hpp"
#include "qsl/speed_limit.hpp"
#include "qsl/synthesis.hpp"
