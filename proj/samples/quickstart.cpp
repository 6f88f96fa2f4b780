// Sphere sizes, ends and end depth for the lamplighter group Z/2 wr Z.

#include <iostream>

#include "endslab/endslab.hpp"

int main() {
  using namespace endslab;
  const auto o = make_group(GroupSpec::lamplighter(2));

  const auto table = explore(o, 12);
  std::cout << "|S(r)|, r = 0..12:";
  for (auto s : sphere_sizes(table)) std::cout << ' ' << s;
  std::cout << '\n';

  const std::vector<int> schedule = {8, 12};
  const auto ends = end_count_estimate(table, 3, schedule);
  std::cout << "ends: " << to_string(ends.classification) << '\n';

  const auto profile = end_depth_profile(o, 3);
  for (const auto& v : profile.values) {
    std::cout << "V0(" << v.r << ") = " << v.value << (v.certified ? " (certified)" : "") << '\n';
  }
  std::cout << "V0(r) <= 4r: " << (linear_end_depth_check(profile.values).pass ? "yes" : "no") << '\n';
}
