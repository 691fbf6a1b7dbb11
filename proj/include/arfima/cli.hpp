#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "arfima/simulate.hpp"

namespace arfima {

enum class Transform { None, Log, Diff, LogDiff };
Transform transform_from_string(const std::string& s);
std::string to_string(Transform t);

struct DatasetFrame {
  std::string name;
  std::string source;
  VectorXd values;
  Transform transform = Transform::None;
  Index T() const { return values.size(); }
};

// One numeric column; a header line is optional. With several columns the
// named column (or the last one) is used.
DatasetFrame read_series_csv(const std::string& path, const std::string& column = "");
DatasetFrame read_series_csv(std::istream& in, const std::string& source, const std::string& column = "");
VectorXd apply_transform(const VectorXd& x, Transform t);

struct BreakFit {
  double tau_hat = 0;
  Index k_hat = 0;  // last observation of the pre-break regime
  double mu_hat = 0, beta_hat = 0;
  double ssr = 0;
  VectorXd filtered;
};

BreakFit break_filter(const VectorXd& x, double trim = 0.15);

std::string format_double(double v);

// Entry point of the command-line tool; returns the exit status.
int run_cli(int argc, char** argv);

}  // namespace arfima
