#pragma once

#include "bloch/coeffs.hpp"
#include "bloch/common.hpp"
#include "bloch/fiber.hpp"
#include "bloch/homog.hpp"
#include "bloch/io.hpp"
#include "bloch/lattice.hpp"
#include "bloch/presets.hpp"
#include "bloch/refine.hpp"
#include "bloch/semigroup.hpp"
#include "bloch/spectral.hpp"
#include "bloch/zak.hpp"
