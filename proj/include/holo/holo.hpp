#pragma once

#include "holo/adiabatic.hpp"
#include "holo/bloch.hpp"
#include "holo/errors.hpp"
#include "holo/extremal.hpp"
#include "holo/holonomy.hpp"
#include "holo/manifold.hpp"
#include "holo/matcore.hpp"
#include "holo/synthesis.hpp"
#include "holo/version.hpp"
