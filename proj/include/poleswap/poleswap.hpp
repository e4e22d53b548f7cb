#ifndef POLESWAP_POLESWAP_HPP
#define POLESWAP_POLESWAP_HPP

#include <poleswap/core_transformation.hpp>
#include <poleswap/errors.hpp>
#include <poleswap/generators.hpp>
#include <poleswap/homogeneous.hpp>
#include <poleswap/matrix_market.hpp>
#include <poleswap/moves.hpp>
#include <poleswap/pencil.hpp>
#include <poleswap/rng.hpp>
#include <poleswap/solver.hpp>
#include <poleswap/verify.hpp>

#endif // POLESWAP_POLESWAP_HPP
