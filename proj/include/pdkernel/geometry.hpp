#pragma once

#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "common.hpp"

namespace pdk {

// Coordinates beyond the cloud dimension are held at zero.
using point3 = std::array<double, 3>;

struct point_cloud {
    int dim = 2;
    std::vector<point3> points;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
};

inline double squared_distance(const point3& a, const point3& b) {
    const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
    return dx * dx + dy * dy + dz * dz;
}

inline double distance(const point3& a, const point3& b) { return std::sqrt(squared_distance(a, b)); }

inline void validate(const point_cloud& x) {
    require(x.dim >= 1 && x.dim <= 3, "point cloud dimension must be 1, 2 or 3");
    for (const auto& p : x.points) {
        for (int c = 0; c < 3; ++c) {
            require(std::isfinite(p[c]), "point cloud has a non-finite coordinate");
            require(c < x.dim || p[c] == 0.0, "coordinate beyond the cloud dimension");
        }
    }
}

// N points at angles 2*pi*i/N on the circle of radius r centred at (x, y).
inline point_cloud circle_points(double x, double y, double r, int n) {
    require(n >= 3, "circle_points needs N >= 3");
    require(r > 0.0, "circle_points needs r > 0");
    point_cloud cloud;
    cloud.dim = 2;
    cloud.points.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double angle = 2.0 * std::numbers::pi * i / n;
        cloud.points.push_back({x + r * std::cos(angle), y + r * std::sin(angle), 0.0});
    }
    return cloud;
}

inline point_cloud lift(const point_cloud& x, int dim) {
    require(dim >= x.dim, "cannot lift to a lower dimension");
    point_cloud out = x;
    out.dim = dim;
    return out;
}

inline double diameter(const point_cloud& x) {
    double best = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = i + 1; j < x.size(); ++j)
            best = std::max(best, squared_distance(x.points[i], x.points[j]));
    return std::sqrt(best);
}

inline double directed_hausdorff(const point_cloud& from, const point_cloud& to) {
    double worst = 0.0;
    for (const auto& p : from.points) {
        double nearest = std::numeric_limits<double>::infinity();
        for (const auto& q : to.points) nearest = std::min(nearest, squared_distance(p, q));
        worst = std::max(worst, nearest);
    }
    return std::sqrt(worst);
}

inline double hausdorff_distance(const point_cloud& x, const point_cloud& y) {
    require(!x.empty() && !y.empty(), "Hausdorff distance of an empty cloud");
    require(x.dim == y.dim, "Hausdorff distance between clouds of different dimension");
    return std::max(directed_hausdorff(x, y), directed_hausdorff(y, x));
}

// CSV, one point per line, `x,y[,z]`, no header. The cloud dimension is the column count.
inline point_cloud parse_point_cloud(std::istream& in, const std::string& source = "<stream>") {
    point_cloud cloud;
    cloud.dim = 0;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        std::stringstream ss(line);
        std::string field;
        point3 p{0.0, 0.0, 0.0};
        int cols = 0;
        while (std::getline(ss, field, ',')) {
            if (cols >= 3) throw std::invalid_argument(source + ":" + std::to_string(line_no) + ": more than 3 coordinates");
            try {
                std::size_t used = 0;
                p[cols] = std::stod(field, &used);
                if (field.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument("trailing");
            } catch (const std::exception&) {
                throw std::invalid_argument(source + ":" + std::to_string(line_no) + ": bad number '" + field + "'");
            }
            ++cols;
        }
        if (cloud.dim == 0) cloud.dim = cols;
        if (cols != cloud.dim)
            throw std::invalid_argument(source + ":" + std::to_string(line_no) + ": expected " +
                                        std::to_string(cloud.dim) + " coordinates, got " + std::to_string(cols));
        if (cols < 1) throw std::invalid_argument(source + ":" + std::to_string(line_no) + ": empty row");
        cloud.points.push_back(p);
    }
    if (cloud.points.empty()) throw std::invalid_argument(source + ": no points");
    validate(cloud);
    return cloud;
}

inline point_cloud read_point_cloud(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path);
    return parse_point_cloud(in, path);
}

inline void write_point_cloud(std::ostream& out, const point_cloud& x) {
    for (const auto& p : x.points) {
        for (int c = 0; c < x.dim; ++c) out << (c ? "," : "") << format_real(p[c]);
        out << '\n';
    }
}

inline void write_point_cloud(const std::string& path, const point_cloud& x) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write " + path);
    write_point_cloud(out, x);
}

}  // namespace pdk
