#pragma once

#include "bell.hpp"
#include "errors.hpp"
#include "io.hpp"
#include "model.hpp"
#include "operators.hpp"
#include "reduced.hpp"
#include "spectral.hpp"
#include "sweep.hpp"
