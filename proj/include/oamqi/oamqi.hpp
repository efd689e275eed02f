// oamqi.hpp
// Umbrella header. The dense oracle (Eigen) is included separately from dense_oracle.hpp.

#pragma once

#include "bell.hpp"
#include "elements.hpp"
#include "hilbert.hpp"
#include "io.hpp"
#include "sampling.hpp"
#include "soba.hpp"
#include "sources.hpp"
#include "tomography.hpp"
