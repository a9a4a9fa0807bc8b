// Weinstock verdicts and a Kallin separating polynomial for a small real Jordan form.
#include <umbrella/umbrella.hpp>

#include <iostream>

using namespace umbrella;

int main() {
    const RatMatrix rot2{{0, -2}, {2, 0}};
    const Verdict v = weinstock_decide(rot2);
    std::cout << "rotation by 2: " << to_string(v.kind) << ", witness " << format_complex(*v.witness) << "\n";

    const RealJordanSpec spec{{RealBlock{Rational(2), 2}, ComplexBlock{0, Rational(1, 2), 1}}};
    const RatMatrix a = spec.to_matrix();
    std::cout << "Jordan form: " << to_string(weinstock_decide(a).kind) << "\n";
    const KallinCertificate cert = kallin_construct(spec);
    const KallinReport rep = kallin_verify(cert, a);
    std::cout << "  p = " << to_string(cert.p) << "\n  delta = " << to_string(cert.delta)
              << "\n  margins: " << to_string(rep.margin_L1) << " on R^n, " << to_string(rep.margin_L2)
              << " on (A + iI)R^n\n  certificate " << (rep.valid ? "valid" : "INVALID") << "\n";
    return rep.valid ? 0 : 1;
}
