#pragma once

#include "momentlines/error.hpp"
#include "momentlines/hamburger.hpp"
#include "momentlines/interval_set.hpp"
#include "momentlines/line_reduction.hpp"
#include "momentlines/low_order.hpp"
#include "momentlines/measure.hpp"
#include "momentlines/order3.hpp"
