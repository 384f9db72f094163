#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mixdeconv/dna.hpp"

namespace mixdeconv {

inline std::size_t num_genotypes(std::size_t num_alleles) {
    return num_alleles * (num_alleles + 1) / 2;
}

/// All J(J+1)/2 unordered genotypes over J alleles in lexicographic
/// (a, b) order with a <= b: (0,0), (0,1), ..., (0,J-1), (1,1), ...
std::vector<Genotype> enumerate_genotypes(std::size_t num_alleles);

/// Index of `g` in enumerate_genotypes(J) order.
std::size_t genotype_index(const Genotype& g, std::size_t num_alleles);

/// One locus assignment matrix: a genotype per contributor row. Rows of the
/// implied {0, 1/2, 1} matrix always sum to one by construction.
struct GenotypeMatrix {
    std::vector<Genotype> rows;
    std::size_t num_alleles = 0;

    std::size_t k() const { return rows.size(); }
    double entry(std::size_t row, std::size_t allele) const {
        const Genotype& g = rows[row];
        if (g.homozygous()) return g.a == allele ? 1.0 : 0.0;
        if (g.a == allele || g.b == allele) return 0.5;
        return 0.0;
    }
};

/// Theoretical allele proportions q = A^T p (length = catalog size).
std::vector<double> allele_proportions(const GenotypeMatrix& a, std::span<const double> p);

}  // namespace mixdeconv
