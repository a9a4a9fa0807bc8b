#pragma once

#include "rational.hpp"
#include "multipoly.hpp"
#include "matrix.hpp"
#include "symplectic.hpp"
#include "foliation.hpp"
#include "local_algebra.hpp"
#include "convexity.hpp"
#include "portrait.hpp"
#include "io.hpp"
