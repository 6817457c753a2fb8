// SPDX-License-Identifier: Apache-2.0
// Umbrella header for the library (the lab/ headers are separate and need
// nlohmann/json).
#pragma once

#include "kakeya/bitstring.hpp"
#include "kakeya/dirtree.hpp"
#include "kakeya/dyadic.hpp"
#include "kakeya/error.hpp"
#include "kakeya/families.hpp"
#include "kakeya/gtree.hpp"
#include "kakeya/interval.hpp"
#include "kakeya/kset.hpp"
#include "kakeya/measure.hpp"
#include "kakeya/membership.hpp"
#include "kakeya/percolation.hpp"
#include "kakeya/rational.hpp"
#include "kakeya/seed.hpp"
#include "kakeya/separation.hpp"
#include "kakeya/splitting.hpp"
#include "kakeya/sticky.hpp"
#include "kakeya/svg.hpp"
#include "kakeya/sweep.hpp"
#include "kakeya/theorem2.hpp"
