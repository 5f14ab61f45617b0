// Minimal library walk-through: clouds -> H1 diagrams -> PWGK Gram matrix -> KPCA.
#include <iostream>

#include "pdkernel/ball_model.hpp"
#include "pdkernel/kernels.hpp"
#include "pdkernel/kpca.hpp"
#include "pdkernel/synth.hpp"

int main() {
    using namespace pdk;
    std::vector<persistence_diagram> diagrams;
    for (std::size_t i = 0; i < 8; ++i) {
        persistence_diagram d;
        synth_sample_at(42, i, &d);
        diagrams.push_back(d);
    }
    diagrams.push_back(fast_persistence(lift(circle_points(0.0, 0.0, 1.0, 10), 3), 1));

    const double sigma = median_sigma(diagrams);
    const double c = median_c(diagrams, 5.0);
    auto spec = kernel_spec::pwgk(sigma, c, 5);
    spec.outer = outer_kind::gaussian;
    spec.tau = median_tau(diagrams, spec);
    const auto g = gram(diagrams, spec);

    std::cout << "sigma " << format_real(sigma) << "  C " << format_real(c) << "  tau " << format_real(spec.tau) << "\n";
    write_gram(std::cout, g.values);
    const auto e = kpca(g.values, 2);
    std::cout << "KPCA contribution " << format_real(e.contribution[0]) << ", " << format_real(e.contribution[1]) << "\n";
}
