#include "faultflow/quadrature.hpp"

#include <stdexcept>

namespace faultflow {

namespace {

std::vector<TriQPoint> perm3(double a, double w) {
  const double b = 1.0 - 2.0 * a;
  return {{b, a, a, w}, {a, b, a, w}, {a, a, b, w}};
}

std::vector<TriQPoint> perm6(double a, double b, double w) {
  const double c = 1.0 - a - b;
  return {{a, b, c, w}, {a, c, b, w}, {b, a, c, w}, {b, c, a, w}, {c, a, b, w}, {c, b, a, w}};
}

std::vector<TriQPoint> cat(std::vector<TriQPoint> a, const std::vector<TriQPoint>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

const std::vector<TriQPoint> kTri1{{1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0}};

// Dunavant rules
const std::vector<TriQPoint> kTri2 = perm3(1.0 / 6.0, 1.0 / 3.0);

const std::vector<TriQPoint> kTri4 =
    cat(perm3(0.445948490915965, 0.223381589678011), perm3(0.091576213509771, 0.109951743655322));

const std::vector<TriQPoint> kTri6 =
    cat(cat(perm3(0.063089014491502, 0.050844906370207), perm3(0.249286745170910, 0.116786275726379)),
        perm6(0.310352451033785, 0.053145049844816, 0.082851075618374));

const std::vector<LineQPoint> kLine1{{0.5, 1.0}};
const std::vector<LineQPoint> kLine3{{0.5 - 0.28867513459481287, 0.5},
                                     {0.5 + 0.28867513459481287, 0.5}};
const std::vector<LineQPoint> kLine5{{0.5 - 0.3872983346207417, 5.0 / 18},
                                     {0.5, 8.0 / 18},
                                     {0.5 + 0.3872983346207417, 5.0 / 18}};
const std::vector<LineQPoint> kLine7{{0.5 - 0.43056815579702629, 0.17392742256872692},
                                     {0.5 - 0.16999052179242816, 0.32607257743127307},
                                     {0.5 + 0.16999052179242816, 0.32607257743127307},
                                     {0.5 + 0.43056815579702629, 0.17392742256872692}};

}  // namespace

const std::vector<TriQPoint>& tri_rule(int degree) {
  if (degree <= 1) return kTri1;
  if (degree <= 2) return kTri2;
  if (degree <= 4) return kTri4;
  if (degree <= 6) return kTri6;
  throw std::invalid_argument("tri_rule: degree > 6 not tabulated");
}

const std::vector<LineQPoint>& line_rule(int degree) {
  if (degree <= 1) return kLine1;
  if (degree <= 3) return kLine3;
  if (degree <= 5) return kLine5;
  if (degree <= 7) return kLine7;
  throw std::invalid_argument("line_rule: degree > 7 not tabulated");
}

}  // namespace faultflow
