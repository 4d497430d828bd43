#pragma once

#include <functional>
#include <vector>

// Radial tabulation of a kernel with asymptotic tail laws. When an exact
// evaluator is attached it is preferred over table interpolation; the
// table remains the exchange format for dumps and tail fits.

namespace relfrac {

struct PowerLaw {
    double exponent = 0.0;    // value ~ coefficient * r^exponent as r -> 0
    double coefficient = 0.0;
    bool valid = false;
};

struct ExpLaw {
    double rate = 0.0;        // value ~ coefficient * r^exponent * exp(-rate r)
    double exponent = 0.0;
    double coefficient = 0.0;
    bool valid = false;
};

struct RadialKernelTable {
    std::vector<double> radii;  // increasing, positive
    std::vector<double> values;
    PowerLaw small_r_law;
    ExpLaw large_r_law;
    std::function<double(double)> eval_fn; // exact evaluator, optional

    /// Kernel value at radius r: exact evaluator if present, otherwise
    /// log-log interpolation inside the table and the tail laws outside.
    double operator()(double r) const;

    double small_r_value(double r) const;
    double large_r_value(double r) const;
};

/// Builds a log-spaced table from an evaluator and keeps the evaluator.
RadialKernelTable make_radial_table(std::function<double(double)> fn, double r_min,
                                    double r_max, int count, PowerLaw small_law = {},
                                    ExpLaw large_law = {});

} // namespace relfrac
