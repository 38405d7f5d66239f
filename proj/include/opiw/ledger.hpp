#pragma once

#include <cstdint>

namespace opiw {

// Running account of field-arithmetic costs charged by the reversible
// execution models. Counters never decrease. One ledger per execution
// thread; concurrent runs merge by summation.
//
// qq_mult    both operands data-dependent (non-Clifford cost class)
// qc_mult    one operand a classical constant (Clifford-only cost class)
// gf_inverse field inversions; each expands to cost_inv_mults qq-grade
//            multiplications, accounted in the derived gate totals only
//            so that an inversion is never double counted
// cswap      controlled swap of one field cell
// cadd       controlled add of one field cell
struct CostLedger {
  std::uint64_t qq_mult = 0;
  std::uint64_t qc_mult = 0;
  std::uint64_t gf_inverse = 0;
  std::uint64_t cswap = 0;
  std::uint64_t cadd = 0;

  void merge(const CostLedger &o) {
    qq_mult += o.qq_mult;
    qc_mult += o.qc_mult;
    gf_inverse += o.gf_inverse;
    cswap += o.cswap;
    cadd += o.cadd;
  }

  bool operator==(const CostLedger &o) const = default;
};

}  // namespace opiw
