#pragma once

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "causetlab/errors.hpp"
#include "causetlab/height.hpp"
#include "causetlab/io.hpp"
#include "causetlab/sampling.hpp"

namespace causetlab {

// A finite causal-metric space: an n x n matrix of causal distances obeying
// the three axioms (zero diagonal, antisymmetry, reverse triangle).
struct FiniteCausalSpace {
    std::size_t n = 0;
    std::vector<double> dist; // row-major

    double at(std::size_t i, std::size_t j) const { return dist[i * n + j]; }
    double& at(std::size_t i, std::size_t j) { return dist[i * n + j]; }

    // Throws with the offending indices on the first axiom violation.
    void validate(double tol = 1e-12) const {
        if (dist.size() != n * n) throw std::invalid_argument("causal space: bad matrix shape");
        for (std::size_t i = 0; i < n; ++i) {
            if (at(i, i) != 0.0)
                throw std::invalid_argument("causal space: nonzero diagonal at " +
                                            std::to_string(i));
            for (std::size_t j = 0; j < n; ++j) {
                if (at(i, j) < 0.0)
                    throw std::invalid_argument("causal space: negative entry at (" +
                                                std::to_string(i) + "," + std::to_string(j) + ")");
                if (at(i, j) > 0.0 && at(j, i) > 0.0)
                    throw std::invalid_argument("causal space: antisymmetry violated at (" +
                                                std::to_string(i) + "," + std::to_string(j) + ")");
            }
        }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (at(i, j) <= 0.0) continue;
                for (std::size_t k = 0; k < n; ++k) {
                    if (at(j, k) <= 0.0) continue;
                    if (at(i, j) + at(j, k) > at(i, k) + tol)
                        throw std::invalid_argument(
                            "causal space: reverse triangle violated at (" + std::to_string(i) +
                            "," + std::to_string(j) + "," + std::to_string(k) + ")");
                }
            }
    }

    bool valid(double tol = 1e-12) const {
        try {
            validate(tol);
            return true;
        } catch (const std::invalid_argument&) {
            return false;
        }
    }
};

// Pairwise discrete causal distances of a sample: D(p_i, p_j) for all
// ordered index pairs, via one chain sweep per source point.
inline FiniteCausalSpace discrete_distance_matrix(const CausetSample& s, double c_d) {
    if (c_d <= 0.0) throw std::invalid_argument("discrete_distance_matrix: c_d must be positive");
    const std::size_t n = s.size();
    FiniteCausalSpace space;
    space.n = n;
    space.dist.assign(n * n, 0.0);
    if (n < 2) return space;
    const double inv_scale =
        1.0 / (c_d * std::pow(s.density, 1.0 / static_cast<double>(s.dim())));

    if (s.dim() == 2) {
        const auto lc = detail::lightcone_order(std::span(s.points));
        std::vector<std::uint32_t> row;
        std::vector<double> scratch;
        for (std::size_t si = 0; si + 1 < n; ++si) {
            detail::source_heights_d2(lc, si, row, scratch);
            const std::size_t i = lc.to_input[si];
            for (std::size_t j = si + 1; j < n; ++j)
                if (row[j] != UINT32_MAX)
                    space.at(i, lc.to_input[j]) = static_cast<double>(row[j]) * inv_scale;
        }
        return space;
    }

    // general d: per-source dynamic program over the time-sorted order
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::uint32_t> chain(n, 0);
        for (std::size_t j = i + 1; j < n; ++j) {
            if (causal_distance(s.points[i], s.points[j]) <= 0.0) continue;
            std::uint32_t best = 0;
            for (std::size_t k = i + 1; k < j; ++k) {
                if (chain[k] == 0 || chain[k] <= best) continue;
                if (causal_distance(s.points[k], s.points[j]) > 0.0) best = chain[k];
            }
            chain[j] = best + 1;
            space.at(i, j) = static_cast<double>(best) * inv_scale;
        }
    }
    return space;
}

inline std::string fcs_to_csv(const FiniteCausalSpace& space, const std::string& comment = "") {
    std::ostringstream out;
    if (!comment.empty()) out << "# " << comment << "\n";
    for (std::size_t i = 0; i < space.n; ++i) {
        for (std::size_t j = 0; j < space.n; ++j) {
            if (j) out << ',';
            out << io::format_double(space.at(i, j));
        }
        out << '\n';
    }
    return out.str();
}

inline FiniteCausalSpace fcs_from_csv(const std::string& text) {
    FiniteCausalSpace space;
    std::istringstream in(text);
    std::string line;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto fields = io::split_csv_line(line);
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& f : fields) row.push_back(io::parse_double(f));
        rows.push_back(std::move(row));
    }
    space.n = rows.size();
    for (const auto& row : rows) {
        if (row.size() != space.n) throw io_error("causal space csv is not square");
        space.dist.insert(space.dist.end(), row.begin(), row.end());
    }
    return space;
}

} // namespace causetlab
