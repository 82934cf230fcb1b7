#pragma once
#include "apatlas/core.hpp"
#include "apatlas/errors.hpp"
#include "apatlas/families.hpp"
#include "apatlas/figures.hpp"
#include "apatlas/io.hpp"
#include "apatlas/ode.hpp"
#include "apatlas/quadrature.hpp"
#include "apatlas/roots.hpp"
#include "apatlas/special.hpp"
#include "apatlas/suites.hpp"
#include "apatlas/svg.hpp"
#include "apatlas/verify.hpp"

//! apatlas: every global homogeneous solution family of Delta u = gamma u^(gamma-1)
//! in the plane, as evaluable objects with numerical verification.
namespace apatlas {}
