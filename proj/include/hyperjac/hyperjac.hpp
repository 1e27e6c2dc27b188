#pragma once

#include "rational.hpp"
#include "tower.hpp"
#include "finite_field.hpp"
#include "upoly.hpp"
#include "ff_poly.hpp"
#include "mpoly.hpp"
#include "reduction.hpp"
#include "catalog.hpp"
#include "differential.hpp"
#include "jacobian.hpp"
#include "kernel.hpp"
#include "simplicity.hpp"
