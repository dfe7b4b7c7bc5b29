#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace swarm {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(const Vec2& o) {
        x += o.x;
        y += o.y;
        return *this;
    }
    Vec2& operator-=(const Vec2& o) {
        x -= o.x;
        y -= o.y;
        return *this;
    }
    bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm2() const { return x * x + y * y; }
    double norm() const { return std::sqrt(norm2()); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

inline double clamp(double v, double lo, double hi) { return v < lo ? lo : (v > hi ? hi : v); }

inline Vec2 clamp_per_axis(const Vec2& v, double limit) {
    return {clamp(v.x, -limit, limit), clamp(v.y, -limit, limit)};
}

// Contract violations (bad arguments, shape mismatches) and configuration
// problems are reported through these; they are not recoverable mid-run.
class ContractError : public std::runtime_error {
 public:
    explicit ContractError(const std::string& msg) : std::runtime_error(msg) {}
};

class ConfigError : public std::runtime_error {
 public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

#define SWARM_REQUIRE(cond, msg)                                            \
    do {                                                                    \
        if (!(cond)) throw ::swarm::ContractError(std::string("contract: ") + (msg)); \
    } while (0)

}  // namespace swarm
