// Prints the characteristic foliation of the standard umbrella and of a Henon
// perturbation, with the coefficients of the perturbed system.
#include <umbrella/umbrella.hpp>

#include <iostream>

using namespace umbrella;

namespace {

void show(const std::string& label, const PolyMap& phi) {
    const VectorField2 x = characteristic_field(phi);
    const auto c = extract_system_coefficients(x);
    std::cout << label << "\n  alpha = " << to_string(x.alpha) << "\n  beta  = " << to_string(x.beta)
              << "\n  g11 = " << to_string(c.g11) << ", g12 = " << to_string(c.g12) << ", g22 = " << to_string(c.g22)
              << ", a02 = " << to_string(c.a02) << ", b12 = " << to_string(c.b12) << ", b03 = " << to_string(c.b03)
              << (c.generic ? "  (generic)" : "  (not generic)") << "\n  multiplicity: ";
    const auto rep = multiplicity(x);
    if (rep.mu0) std::cout << *rep.mu0 << " (certified at k = " << *rep.certified_at << ")\n";
    else std::cout << "undetermined up to k = " << kDefaultKMax << "\n";
}

}  // namespace

int main() {
    show("identity", PolyMap::identity(4));

    HenonSpec h;
    h.V = Poly(2, {"y1", "y2"});
    h.V.add_term({2, 1}, Rational(1, 3));
    h.V.add_term({0, 3}, Rational(-1));
    show("Henon map, V = y1^2 y2 / 3 - y2^3", henon_map(h));
}
