#include "mixdeconv/genotype_space.hpp"

#include <stdexcept>

namespace mixdeconv {

std::vector<Genotype> enumerate_genotypes(std::size_t num_alleles) {
    std::vector<Genotype> out;
    out.reserve(num_genotypes(num_alleles));
    for (std::size_t a = 0; a < num_alleles; ++a)
        for (std::size_t b = a; b < num_alleles; ++b) out.emplace_back(a, b);
    return out;
}

std::size_t genotype_index(const Genotype& g, std::size_t num_alleles) {
    if (g.b >= num_alleles) throw std::out_of_range("genotype_index: allele out of range");
    // offset of block with first allele a, then position of b within it
    const std::size_t a = g.a, j = num_alleles;
    return a * j - a * (a + 1) / 2 + a + (g.b - g.a);
}

std::vector<double> allele_proportions(const GenotypeMatrix& a, std::span<const double> p) {
    if (a.rows.size() != p.size())
        throw std::invalid_argument("allele_proportions: row/proportion size mismatch");
    std::vector<double> q(a.num_alleles, 0.0);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        const Genotype& g = a.rows[i];
        if (g.homozygous()) {
            q[g.a] += p[i];
        } else {
            q[g.a] += 0.5 * p[i];
            q[g.b] += 0.5 * p[i];
        }
    }
    return q;
}

}  // namespace mixdeconv
