#pragma once

#include "stokesfem/assembly.hpp"
#include "stokesfem/cases.hpp"
#include "stokesfem/errors.hpp"
#include "stokesfem/geometry.hpp"
#include "stokesfem/interpolation.hpp"
#include "stokesfem/linalg.hpp"
#include "stokesfem/mesh.hpp"
#include "stokesfem/quadrature.hpp"
#include "stokesfem/solvers.hpp"
#include "stokesfem/spaces.hpp"
#include "stokesfem/study.hpp"
