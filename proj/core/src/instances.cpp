#include "wkm/instances.hpp"

namespace wkm::instances {

std::vector<OracleInstance> oracle_set() {
  std::vector<OracleInstance> out;
  // {0,1} and {4,5}: four terms of 0.25.
  out.push_back({"line4", WeightedPointSet::unit({{0}, {1}, {4}, {5}}), 2, 1.0});
  // Centroid (0.1, 0): 9 * 0.01 + 1 * 0.81.
  out.push_back({"pair9", WeightedPointSet::from_rows({{0, 0}, {1, 0}}, {9, 1}), 1, 0.9});
  // {0 w2, 1 w2, 2 w1}: centroid 0.8, 2*0.64 + 2*0.04 + 1.44 = 2.8.
  // {10 w1, 11 w3, 12 w1}: centroid 11, 1 + 0 + 1 = 2.
  out.push_back({"weighted_line",
                 WeightedPointSet::from_rows({{0}, {1}, {2}, {10}, {11}, {12}}, {2, 2, 1, 1, 3, 1}), 2, 4.8});
  // Pairs two apart about (1,0), (10,1), (1,40): 6+6, 1+1, 1+1.
  out.push_back({"three_pairs",
                 WeightedPointSet::from_rows({{0, 0}, {2, 0}, {10, 0}, {10, 2}, {0, 40}, {2, 40}}, {6, 6, 1, 1, 1, 1}),
                 3, 16.0});
  // Unit-square corners: each corner is 0.5 from its square's center.
  // Weights 3, 1, 1 give 4*3*0.5 + 4*0.5 + 4*0.5 = 10.
  out.push_back({"three_squares",
                 WeightedPointSet::from_rows({{0, 0}, {1, 0}, {0, 1}, {1, 1},
                                              {6, 0}, {7, 0}, {6, 1}, {7, 1},
                                              {0, 30}, {1, 30}, {0, 31}, {1, 31}},
                                             {3, 3, 3, 3, 1, 1, 1, 1, 1, 1, 1, 1}),
                 3, 10.0});
  return out;
}

WeightedPointSet chi_square_points() {
  return WeightedPointSet::from_rows({{0, 0}, {1, 0}, {2, 1}, {3, 3}, {-1, 2}, {4, -1}}, {1.0, 2.0, 0.5, 1.5, 3.0, 1.0});
}

CenterSet chi_square_center() { return CenterSet::from_rows({{1, 1}}); }

WeightedPointSet inaba_points() {
  return WeightedPointSet::from_rows(
      {{0, 0}, {1, 2}, {3, 1}, {-2, 1}, {4, 4}, {0, -3}, {2, -1}, {-1, -1}, {5, 0}, {1, 1}},
      {1, 2, 1, 3, 1, 2, 1, 1, 2, 1});
}

WeightedPointSet kmeanspp_points() {
  return WeightedPointSet::unit({{0.0, 0.0}, {0.5, 0.3}, {-0.4, 0.6}, {0.2, -0.5}, {-0.3, -0.2}, {0.7, 0.6}, {-0.6, 0.1},
                                 {6.0, 5.0}, {6.4, 5.5}, {5.5, 4.6}, {6.2, 4.4}, {5.8, 5.9}, {6.9, 5.1},
                                 {-4.0, 7.0}, {-3.6, 7.4}, {-4.5, 6.5}, {-4.2, 7.7}, {-3.3, 6.8}, {-4.8, 7.2},
                                 {-3.9, 6.2}});
}

}  // namespace wkm::instances
