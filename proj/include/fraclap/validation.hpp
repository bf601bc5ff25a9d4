#pragma once

#include <string>
#include <vector>

namespace fraclap {

struct ValidationRow {
    std::string name;
    double deviation = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// Runs one self-check suite: "gamma", "hyp" or "lemmas".
std::vector<ValidationRow> run_validation_suite(const std::string& suite);

/// 2F1 for z < -1 through the 1/z connection formula. Needs a - b outside
/// the integers. Independent of hyp2f1.
double hyp2f1_inverse_route(double a, double b, double c, double z);

/// Plain Maclaurin series of 1F1 in extended precision with a fixed number
/// of terms. Independent of hyp1f1.
double hyp1f1_taylor(double a, double b, double z, int terms);

}  // namespace fraclap
