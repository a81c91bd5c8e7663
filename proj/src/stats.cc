#include "hzkv/stats.h"

#include <algorithm>
#include <cmath>

namespace hzkv {

double Percentile(std::vector<double> values, double q) {
  if (values.empty()) return 0;
  std::sort(values.begin(), values.end());
  size_t idx = static_cast<size_t>(std::ceil(q * values.size()));
  if (idx == 0) idx = 1;
  if (idx > values.size()) idx = values.size();
  return values[idx - 1];
}

}  // namespace hzkv
