#pragma once

#include "error.hpp"
#include "surface.hpp"
#include "word.hpp"
#include "char_variety.hpp"
#include "picard.hpp"
#include "parallel.hpp"
#include "dynamics.hpp"
#include "cli_io.hpp"
#include "verify.hpp"
