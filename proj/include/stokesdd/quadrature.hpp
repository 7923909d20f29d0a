#pragma once

#include <array>
#include <vector>

namespace stokesdd {

/// Symmetric Gauss rules on the triangle in barycentric coordinates.
/// Weights sum to 1; integrate f over T as area(T) * sum_i w_i f(x_i).
struct TriQuadPoint {
  double l0, l1, l2, w;
};

inline const std::vector<TriQuadPoint>& tri_quadrature_degree4() {
  static const std::vector<TriQuadPoint> rule = [] {
    std::vector<TriQuadPoint> pts;
    auto orbit3 = [&pts](double a, double b, double w) {
      pts.push_back({a, b, b, w});
      pts.push_back({b, a, b, w});
      pts.push_back({b, b, a, w});
    };
    orbit3(0.816847572980459, 0.091576213509771, 0.109951743655322);
    orbit3(0.108103018168070, 0.445948490915965, 0.223381589678011);
    return pts;
  }();
  return rule;
}

inline const std::vector<TriQuadPoint>& tri_quadrature_degree6() {
  static const std::vector<TriQuadPoint> rule = [] {
    std::vector<TriQuadPoint> pts;
    auto orbit3 = [&pts](double a, double b, double w) {
      pts.push_back({a, b, b, w});
      pts.push_back({b, a, b, w});
      pts.push_back({b, b, a, w});
    };
    auto orbit6 = [&pts](double a, double b, double c, double w) {
      pts.push_back({a, b, c, w});
      pts.push_back({a, c, b, w});
      pts.push_back({b, a, c, w});
      pts.push_back({b, c, a, w});
      pts.push_back({c, a, b, w});
      pts.push_back({c, b, a, w});
    };
    orbit3(0.873821971016996, 0.063089014491502, 0.050844906370207);
    orbit3(0.501426509658179, 0.249286745170910, 0.116786275726379);
    orbit6(0.636502499121399, 0.310352451033785, 0.053145049844816,
           0.082851075618374);
    return pts;
  }();
  return rule;
}

} // namespace stokesdd
