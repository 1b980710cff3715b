#pragma once

#include "fran/alignment.hpp"
#include "fran/combinatorics.hpp"
#include "fran/edge_decode.hpp"
#include "fran/error.hpp"
#include "fran/fronthaul.hpp"
#include "fran/gf256.hpp"
#include "fran/ia_verify.hpp"
#include "fran/interference.hpp"
#include "fran/mds.hpp"
#include "fran/ndt.hpp"
#include "fran/placement.hpp"
#include "fran/rational.hpp"
#include "fran/storage.hpp"
#include "fran/topology.hpp"
