// Writes a synthetic dataset in the Social Network Ads column layout.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "fedforge/logreg/dataset.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate a synthetic Age/Purchased dataset"};
  std::uint64_t seed = 1;
  std::size_t rows = 400;
  double b0 = 0.0;
  double b1 = 2.0;
  std::string out_path;
  app.add_option("--seed", seed, "generator seed");
  app.add_option("--rows", rows, "number of rows")->check(CLI::Range(2, 1000000));
  app.add_option("--b0", b0, "intercept of the generating model");
  app.add_option("--b1", b1, "slope of the generating model (standardized age)");
  app.add_option("-o,--out", out_path, "output CSV (stdout when omitted)");
  CLI11_PARSE(app, argc, argv);

  const auto ds = fedforge::logreg::gen_synthetic(seed, rows, b0, b1);
  if (out_path.empty()) {
    fedforge::logreg::write_sna_csv(ds, std::cout, seed);
    return 0;
  }
  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "cannot open " << out_path << '\n';
    return 1;
  }
  fedforge::logreg::write_sna_csv(ds, out, seed);
  return 0;
}
