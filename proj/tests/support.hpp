#pragma once

// Shared helpers for the test and acceptance suites: comparison utilities,
// the independent numerical oracles (finite differences, power iteration),
// and deterministic synthetic market data.

#include <string>
#include <vector>

#include "finlstm/data.hpp"
#include "finlstm/matrix.hpp"
#include "finlstm/model.hpp"

namespace finlstm::testing {

double max_abs_diff(const Matrix& a, const Matrix& b);

/// Relative error with floor: |a - b| / max(|a|, |b|, 1e-8).
double rel_err(double a, double b);

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b);
bool bitwise_equal(const Matrix& a, const Matrix& b);

/// max |U^T U - I|.
double identity_residual(const Matrix& u);

/// Largest singular value via power iteration on U^T U; independent of the
/// SVD implementation.
double spectral_norm(const Matrix& u, std::size_t iterations = 200);

double l2_norm(const std::vector<double>& v);

/// Loss of a model on one window, through the public forward path.
double model_loss(const Model& m, const Matrix& x, const Matrix& targets);

/// Central-difference gradient of model_loss for every parameter scalar, in
/// the pinned tensor order. The oracle touches only the forward pass.
std::vector<std::vector<double>> fd_model_gradients(Model m, const Matrix& x,
                                                    const Matrix& targets, double step);

/// Worst relative error between analytic and finite-difference gradients,
/// over every parameter scalar of the model.
double max_gradient_rel_err(const Model& m, const Matrix& x, const Matrix& targets,
                            double step);

// --- synthetic market data -------------------------------------------------

Date next_calendar_day(Date d);

/// Deterministic smooth OHLCV path: prices ride a sine of the given relative
/// amplitude and period (in days), volume follows a shorter cycle. Dates are
/// consecutive calendar days from `start`.
std::vector<OhlcvRecord> sine_records(std::size_t days, double amplitude = 0.04,
                                      double period = 20.0, Date start = {2005, 1, 1});

std::vector<OhlcvRecord> constant_records(std::size_t days, double price = 100.0,
                                          double volume = 1e6, Date start = {2005, 1, 1});

/// Records rendered in the CSV layout the parser accepts.
std::string to_csv(const std::vector<OhlcvRecord>& records, bool adj_close = false);

}  // namespace finlstm::testing
