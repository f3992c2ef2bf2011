#pragma once

#include "qseal/analyzer.hpp"
#include "qseal/attack.hpp"
#include "qseal/errors.hpp"
#include "qseal/harness.hpp"
#include "qseal/io.hpp"
#include "qseal/qla.hpp"
#include "qseal/random.hpp"
#include "qseal/seal.hpp"
