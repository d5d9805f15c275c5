// Scores a PAD classifier output and writes its DET curve.
//
//   evaluate_scores scores.csv det.svg

#include <cstdio>
#include <iostream>

#include "padbench/padbench.hpp"

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: evaluate_scores <scores.csv> <det.svg>\n";
    return 2;
  }
  try {
    const auto records = padbench::read_scores(argv[1]);
    const auto curve = padbench::compute_det(records);
    std::printf("EER       %6.2f %%\n", padbench::compute_eer(curve));
    for (int ap : {10, 20, 100}) {
      const auto op = padbench::bpcer_at_ap(curve, ap);
      std::printf("BPCER%-4d %6.2f %%%s\n", ap, op.bpcer, op.saturated ? "  (saturated)" : "");
    }
    padbench::export_det(curve, argv[2], padbench::DetFormat::Svg, "classifier");
  } catch (const padbench::Error& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
  return 0;
}
