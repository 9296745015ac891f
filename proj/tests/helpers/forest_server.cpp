// Serves a forest dump over the cpath line protocol, so the builtin model
// can stand behind the external bridge in round-trip tests.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cpath/forest.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: forest_server <forest.json>\n");
    return 2;
  }
  std::ifstream in(argv[1]);
  if (!in) {
    std::fprintf(stderr, "cannot open %s\n", argv[1]);
    return 2;
  }
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const cpath::RandomForest forest = cpath::RandomForest::from_json(text);

  std::string line;
  if (!std::getline(std::cin, line) || line.rfind("HELLO cpath/1", 0) != 0) return 1;
  std::printf("OK %d\n", forest.n_classes());
  std::fflush(stdout);

  while (std::getline(std::cin, line)) {
    unsigned long n = 0, p = 0;
    if (std::sscanf(line.c_str(), "PREDICT %lu %lu", &n, &p) != 2) return 1;

    std::vector<double> values;
    values.reserve(n * p);
    for (unsigned long i = 0; i < n; ++i) {
      if (!std::getline(std::cin, line)) return 1;
      std::stringstream row(line);
      std::string cell;
      while (std::getline(row, cell, ',')) values.push_back(std::stod(cell));
    }
    if (values.size() != n * p) return 1;

    std::vector<std::string> names;
    for (unsigned long j = 0; j < p; ++j) names.push_back("x" + std::to_string(j + 1));
    const cpath::Dataset data(std::move(names), std::move(values));
    const cpath::LabelVector preds = forest.predict(data);
    for (unsigned long i = 0; i < n; ++i) std::printf("%d\n", preds[i]);
    std::printf("END\n");
    std::fflush(stdout);
  }
  return 0;
}
