#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "filtration.hpp"

namespace pdk {

struct persistence_pair {
    double birth = 0.0;
    double death = 0.0;

    double persistence() const { return death - birth; }
    friend bool operator==(const persistence_pair&, const persistence_pair&) = default;
    friend auto operator<=>(const persistence_pair&, const persistence_pair&) = default;
};

struct persistence_diagram {
    int q = 0;
    std::vector<persistence_pair> pairs;

    std::size_t size() const { return pairs.size(); }
    bool empty() const { return pairs.empty(); }
    void normalize() { std::sort(pairs.begin(), pairs.end()); }
    friend bool operator==(const persistence_diagram&, const persistence_diagram&) = default;
};

// Indices refer to positions in filtered_complex::simplices.
struct reduction_transcript {
    std::vector<std::pair<int, int>> pairing;  // (birth simplex, death simplex)
    std::vector<int> essential;
};

namespace detail {

inline std::uint64_t simplex_key(std::span<const int> verts, std::uint64_t base) {
    std::uint64_t key = 0;
    for (int v : verts) key = key * base + static_cast<std::uint64_t>(v) + 1;
    return key;
}

// In-place symmetric difference of sorted index lists (Z/2 column addition).
inline void add_column(std::vector<int>& target, const std::vector<int>& source, std::vector<int>& scratch) {
    scratch.clear();
    std::set_symmetric_difference(target.begin(), target.end(), source.begin(), source.end(),
                                  std::back_inserter(scratch));
    target.swap(scratch);
}

}  // namespace detail

// Column reduction of the Z/2 boundary matrix with the twist optimization: dimensions are
// processed from the top down and every column whose simplex is already a pivot is cleared.
inline reduction_transcript reduce_boundary(const filtered_complex& fc) {
    const auto& s = fc.simplices;
    const int total = static_cast<int>(s.size());
    const std::uint64_t base = static_cast<std::uint64_t>(fc.n_vertices) + 1;

    std::unordered_map<std::uint64_t, int> index;
    index.reserve(s.size() * 2);
    int top_dim = 0;
    for (int i = 0; i < total; ++i) {
        index.emplace(detail::simplex_key(s[i].vertex_span(), base), i);
        top_dim = std::max(top_dim, s[i].dim);
    }

    std::vector<std::vector<int>> columns(total);
    std::vector<int> pivot_owner(total, -1);  // row -> column whose pivot it is
    std::vector<char> cleared(total, 0);
    std::vector<int> scratch, facet;

    for (int d = top_dim; d >= 1; --d) {
        for (int j = 0; j < total; ++j) {
            if (s[j].dim != d || cleared[j]) continue;
            auto& col = columns[j];
            const auto verts = s[j].vertex_span();
            for (int drop = 0; drop <= d; ++drop) {
                facet.clear();
                for (int a = 0; a <= d; ++a)
                    if (a != drop) facet.push_back(verts[a]);
                col.push_back(index.at(detail::simplex_key(facet, base)));
            }
            std::sort(col.begin(), col.end());
            while (!col.empty() && pivot_owner[col.back()] >= 0)
                detail::add_column(col, columns[pivot_owner[col.back()]], scratch);
            if (!col.empty()) {
                pivot_owner[col.back()] = j;
                cleared[col.back()] = 1;
            }
        }
    }

    reduction_transcript tr;
    std::vector<char> negative(total, 0);
    for (int j = 0; j < total; ++j)
        if (!columns[j].empty()) negative[j] = 1;
    for (int i = 0; i < total; ++i) {
        if (pivot_owner[i] >= 0) tr.pairing.emplace_back(i, pivot_owner[i]);
        else if (!negative[i]) tr.essential.push_back(i);
    }
    return tr;
}

// Persistence diagram in dimension q. Zero-persistence pairs are dropped; for q = 0 the one
// infinite component is removed. Any other essential class raises essential_class_error.
inline persistence_diagram compute_persistence(const filtered_complex& fc, int q,
                                               const reduction_transcript& tr) {
    require(q >= 0 && q <= fc.q_max, "homology dimension exceeds the complex q_max");
    persistence_diagram out;
    out.q = q;
    const auto& s = fc.simplices;
    for (auto [b, d] : tr.pairing) {
        if (s[b].dim != q) continue;
        if (s[b].value < s[d].value) out.pairs.push_back({s[b].value, s[d].value});
    }
    std::vector<int> essential;
    for (int i : tr.essential)
        if (s[i].dim == q) essential.push_back(i);
    if (q == 0 && !essential.empty()) essential.erase(essential.begin());
    if (!essential.empty()) throw essential_class_error(q, s[essential.front()].value);
    out.normalize();
    return out;
}

inline persistence_diagram compute_persistence(const filtered_complex& fc, int q) {
    return compute_persistence(fc, q, reduce_boundary(fc));
}

// Sum of pers(x)^p over pairs with pers(x) > t.
inline double total_persistence(const persistence_diagram& d, double p, double t = 0.0) {
    require(p >= 1.0, "total persistence needs p >= 1");
    require(t >= 0.0, "total persistence needs t >= 0");
    double sum = 0.0;
    for (const auto& x : d.pairs)
        if (x.persistence() > t) sum += std::pow(x.persistence(), p);
    return sum;
}

// Diagram CSV, lines `q,birth,death` sorted by (q, birth, death).
inline void write_diagrams(std::ostream& out, std::vector<persistence_diagram> diagrams) {
    std::sort(diagrams.begin(), diagrams.end(), [](const auto& a, const auto& b) { return a.q < b.q; });
    for (auto& d : diagrams) {
        d.normalize();
        for (const auto& x : d.pairs) out << d.q << ',' << format_real(x.birth) << ',' << format_real(x.death) << '\n';
    }
}

inline void write_diagram(std::ostream& out, const persistence_diagram& d) { write_diagrams(out, {d}); }

inline void write_diagram(const std::string& path, const persistence_diagram& d) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write " + path);
    write_diagram(out, d);
}

// Returns one diagram per dimension present in the input, ascending in q.
inline std::vector<persistence_diagram> parse_diagrams(std::istream& in, const std::string& source = "<stream>") {
    std::map<int, persistence_diagram> by_q;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        const std::string where = source + ":" + std::to_string(line_no) + ": ";
        std::stringstream ss(line);
        std::string f[3], extra;
        for (auto& field : f)
            if (!std::getline(ss, field, ',')) throw std::invalid_argument(where + "expected q,birth,death");
        if (std::getline(ss, extra, ',')) throw std::invalid_argument(where + "too many fields");
        int q = 0;
        double b = 0.0, d = 0.0;
        try {
            std::size_t used = 0;
            q = std::stoi(f[0], &used);
            b = std::stod(f[1]);
            d = std::stod(f[2]);
        } catch (const std::exception&) {
            throw std::invalid_argument(where + "bad number");
        }
        if (q < 0 || !std::isfinite(b) || !std::isfinite(d) || !(b < d))
            throw std::invalid_argument(where + "need q >= 0 and finite birth < death");
        auto& diag = by_q[q];
        diag.q = q;
        diag.pairs.push_back({b, d});
    }
    std::vector<persistence_diagram> out;
    for (auto& [q, d] : by_q) {
        d.normalize();
        out.push_back(std::move(d));
    }
    return out;
}

// Reads the diagram of dimension q; q < 0 accepts a file holding a single dimension.
// A file with no rows for q yields the empty diagram.
inline persistence_diagram read_diagram(const std::string& path, int q = -1) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path);
    auto all = parse_diagrams(in, path);
    if (q < 0) {
        if (all.empty()) return {};
        require(all.size() == 1, path + ": holds several dimensions, select one");
        return all.front();
    }
    for (auto& d : all)
        if (d.q == q) return d;
    persistence_diagram empty;
    empty.q = q;
    return empty;
}

}  // namespace pdk
