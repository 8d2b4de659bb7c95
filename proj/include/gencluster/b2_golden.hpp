#pragma once

#include "gencluster/b2_golden_data.hpp"
#include "gencluster/golden.hpp"

namespace gencluster {

/// The embedded B2 fixture (d = (2,1), B = [[0,-1],[1,0]]).
inline GoldenFixture b2_golden() { return golden_from_string(embedded::b2_golden_json); }

}  // namespace gencluster
