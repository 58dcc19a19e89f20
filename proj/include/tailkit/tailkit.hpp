#pragma once

#include "applications.hpp"
#include "errors.hpp"
#include "laplace.hpp"
#include "oracle.hpp"
#include "product_asymptotics.hpp"
#include "quadrature.hpp"
#include "random.hpp"
#include "special_functions.hpp"
#include "tail_model.hpp"
