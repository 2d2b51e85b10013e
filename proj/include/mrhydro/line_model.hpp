#pragma once

#include <optional>
#include <string_view>

#include "mrhydro/params.hpp"
#include "mrhydro/transfer_function.hpp"

namespace mrhydro {

/// Intermediate blocks of the lumped line model.
///   A  = k1 / (m1 s^2 + b1 s + k1)
///   B  = (m1 s^2 + b1 s) k1 / (m1 s^2 + b1 s + k1)
///   C  = Z3 k2 / ((m2 s^2 + b2 s)(Z3 + k2) + Z3 k2)
///   D  = (Z3 + k2) / ((m2 s^2 + b2 s)(Z3 + k2) + Z3 k2)
///   Z3 = m3 s^2 + b3 s + k3
/// For a blocked output C and D are the Z3 -> inf limits and Z3 is empty.
struct LineBlocks {
  RationalTF A;
  RationalTF B;
  RationalTF C;
  RationalTF D;
  std::optional<RationalTF> Z3;
};

LineBlocks build_blocks(const ActuationLineParams& p, const LoadImpedance& z);

/// K_I / (tau s + 1) * A / (B D + 1) over one common denominator.
RationalTF build_HF(const ActuationLineParams& p, const LoadImpedance& z);
/// K_I / (tau s + 1) * A C / (B D + 1) over one common denominator.
RationalTF build_HP(const ActuationLineParams& p, const LoadImpedance& z);

/// Physical signals of the line. `Pressure` is the force-equivalent master
/// line pressure k1 (x1 - x2); `Force` is the output force k2 (x2 - x3).
enum class Channel { Force, Pressure };

std::string_view to_string(Channel c);

/// Current-to-channel transfer derived from the equations of motion.
/// The collocated pressure follows A/(BD+1) (build_HF) and the output force
/// follows A C/(BD+1) (build_HP); the time-domain simulator confirms this
/// mapping.
RationalTF channel_tf(const ActuationLineParams& p, const LoadImpedance& z,
                      Channel channel);

}  // namespace mrhydro
