#pragma once

#include "sirmech/core_types.hpp"
#include "sirmech/diagnostics.hpp"
#include "sirmech/dynamics.hpp"
#include "sirmech/errors.hpp"
#include "sirmech/formulations.hpp"
#include "sirmech/hamiltonian.hpp"
#include "sirmech/integrate.hpp"
#include "sirmech/lagrangian.hpp"
#include "sirmech/steppers.hpp"
#include "sirmech/variational.hpp"
