// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "cimc/evaluator.hpp"
#include "json_util.hpp"

namespace cimc::detail {

ojson ratio_json(const Ratio& r);
ojson metrics_ojson(const MetricsReport& r);

}  // namespace cimc::detail
