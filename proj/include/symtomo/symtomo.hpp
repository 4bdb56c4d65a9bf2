#pragma once

#include "symtomo/errors.hpp"
#include "symtomo/lattice.hpp"
#include "symtomo/parallel.hpp"
#include "symtomo/interpolation.hpp"
#include "symtomo/states.hpp"
#include "symtomo/tomography.hpp"
#include "symtomo/dynamics.hpp"
#include "symtomo/reconstruction.hpp"
#include "symtomo/io.hpp"
