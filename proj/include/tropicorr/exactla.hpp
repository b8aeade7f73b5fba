#pragma once

#include "tropicorr/exactla/abelian.hpp"
#include "tropicorr/exactla/lattice.hpp"
#include "tropicorr/exactla/matrix.hpp"
#include "tropicorr/exactla/normal_form.hpp"
#include "tropicorr/exactla/scalar.hpp"
