#pragma once

#include "gaussif/errors.hpp"
#include "gaussif/ext_real.hpp"
#include "gaussif/models.hpp"
#include "gaussif/ifdist.hpp"
#include "gaussif/wigner.hpp"
#include "gaussif/montecarlo.hpp"
#include "gaussif/classify.hpp"
