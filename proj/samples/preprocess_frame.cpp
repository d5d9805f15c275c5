// Rectifies one document frame to the 448x728 training input.
//
//   preprocess_frame frame.jpg out.png x0 y0 x1 y1 x2 y2 x3 y3
//
// Corners run top-left, top-right, bottom-right, bottom-left in pixel-edge
// coordinates.

#include <iostream>
#include <string>

#include "padbench/padbench.hpp"

int main(int argc, char** argv) {
  if (argc != 11) {
    std::cerr << "usage: preprocess_frame <frame> <out.png> x0 y0 x1 y1 x2 y2 x3 y3\n";
    return 2;
  }
  try {
    padbench::Quad quad;
    for (int i = 0; i < 4; ++i) quad.corners[i] = {std::stod(argv[3 + 2 * i]), std::stod(argv[4 + 2 * i])};
    const auto frame = padbench::load_image(argv[1]);
    const auto out = padbench::preprocess_presentation(frame, quad, padbench::PreprocessConfig{});
    padbench::save_image(out, argv[2]);
    std::cout << out.width() << "x" << out.height() << "x" << out.channels() << '\n';
  } catch (const padbench::Error& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
  return 0;
}
