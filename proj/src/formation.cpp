#include "swarm/formation.hpp"

#include "swarm/grouping.hpp"

namespace swarm {

std::vector<Vec2> formation_template(int c) {
    if (c < kPatternMin || c > kPatternMax)
        throw ContractError("formation_template: pattern size out of range");
    std::vector<Vec2> pts(c);
    const double half_pi = 1.5707963267948966192313216916398;
    for (int k = 0; k < c; ++k) {
        double ang = half_pi + 2.0 * 3.14159265358979323846 * k / c;
        pts[k] = {std::cos(ang), std::sin(ang)};
    }
    Vec2 mean{0, 0};
    for (const auto& p : pts) mean += p;
    mean = mean / static_cast<double>(c);
    for (auto& p : pts) p -= mean;
    return pts;
}

}  // namespace swarm
