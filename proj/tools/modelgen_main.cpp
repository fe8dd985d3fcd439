#include "gff/catalog.hpp"

#include <iostream>
#include <string>

/// Regenerates the shipped model files from the built-in catalog so the
/// on-disk JSON always matches the canonical serialization.
int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: modelgen <output-dir>\n";
    return 1;
  }
  const std::string dir = argv[1];
  try {
    gff::save_model(gff::build_u2_model(), dir + "/u2.json");
    gff::Vec p = gff::Vec::Zero(4);
    p[1] = 0.7;
    gff::save_model(gff::build_r4_model(p), dir + "/r4.json");
  } catch (const std::exception& e) {
    std::cerr << "modelgen: " << e.what() << "\n";
    return 1;
  }
  std::cout << "wrote " << dir << "/u2.json and " << dir << "/r4.json\n";
  return 0;
}
