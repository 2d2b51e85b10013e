#include "mrhydro/line_model.hpp"

namespace mrhydro {

LineBlocks build_blocks(const ActuationLineParams& p, const LoadImpedance& z) {
  p.validate();
  z.validate();
  const Polynomial master = Polynomial::second_order(p.m1, p.b1, p.k1);
  const Polynomial master_motion = Polynomial::second_order(p.m1, p.b1, 0.0);
  const Polynomial fluid_motion = Polynomial::second_order(p.m2, p.b2, 0.0);
  const Polynomial k1{p.k1};
  const Polynomial k2{p.k2};

  RationalTF A(k1, master);
  RationalTF B(master_motion * k1, master);

  if (z.is_blocked()) {
    const Polynomial fluid = fluid_motion + k2;
    return {A, B, RationalTF(k2, fluid), RationalTF(Polynomial{1.0}, fluid),
            std::nullopt};
  }
  const auto& load = z.compliant();
  const Polynomial z3 = Polynomial::second_order(load.m3, load.b3, load.k3);
  const Polynomial den = fluid_motion * (z3 + k2) + z3 * k2;
  return {A, B, RationalTF(z3 * k2, den), RationalTF(z3 + k2, den),
          RationalTF(z3, Polynomial{1.0})};
}

namespace {

// Multiplying out the blocks over the common denominator P1 * den gives
//   A / (BD + 1)   = k1 den / (Q1 k1 E + P1 den)
//   A C / (BD + 1) = k1 k2 Z3 / (Q1 k1 E + P1 den)
// with P1 = m1 s^2 + b1 s + k1, Q1 = m1 s^2 + b1 s, E = Z3 + k2 and
// den = (m2 s^2 + b2 s) E + Z3 k2. For a blocked output E = 1, Z3 = 1 and
// den = m2 s^2 + b2 s + k2. Building the polynomials directly avoids the
// root-based cancellation the block algebra would need and keeps the DC
// gain exact.
struct Assembled {
  Polynomial pressure_num;
  Polynomial force_num;
  Polynomial den;
};

Assembled assemble(const ActuationLineParams& p, const LoadImpedance& z) {
  p.validate();
  z.validate();
  const Polynomial master = Polynomial::second_order(p.m1, p.b1, p.k1);
  const Polynomial master_motion = Polynomial::second_order(p.m1, p.b1, 0.0);
  const Polynomial fluid_motion = Polynomial::second_order(p.m2, p.b2, 0.0);
  const Polynomial lag{1.0, p.tau};

  Polynomial e{1.0}, z3{1.0}, den;
  if (z.is_blocked()) {
    den = fluid_motion + Polynomial{p.k2};
  } else {
    const auto& load = z.compliant();
    z3 = Polynomial::second_order(load.m3, load.b3, load.k3);
    e = z3 + Polynomial{p.k2};
    den = fluid_motion * e + z3 * p.k2;
  }
  const Polynomial loop = master_motion * e * p.k1 + master * den;
  return {den * p.k1, z3 * (p.k1 * p.k2), lag * loop};
}

}  // namespace

RationalTF build_HF(const ActuationLineParams& p, const LoadImpedance& z) {
  auto a = assemble(p, z);
  return RationalTF(a.pressure_num * p.K_I, a.den);
}

RationalTF build_HP(const ActuationLineParams& p, const LoadImpedance& z) {
  auto a = assemble(p, z);
  return RationalTF(a.force_num * p.K_I, a.den);
}

std::string_view to_string(Channel c) {
  return c == Channel::Force ? "force" : "pressure";
}

RationalTF channel_tf(const ActuationLineParams& p, const LoadImpedance& z,
                      Channel channel) {
  return channel == Channel::Pressure ? build_HF(p, z) : build_HP(p, z);
}

}  // namespace mrhydro
