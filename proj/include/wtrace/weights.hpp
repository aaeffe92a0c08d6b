#pragma once

#include <optional>
#include <vector>

namespace wtrace {

enum class ApClass { ap_member, ainf_only, not_ainf };

const char* to_string(ApClass c);

// w(t) = |t|^gamma, restricted to the locally integrable range gamma > -1.
class PowerWeight {
 public:
  explicit PowerWeight(double gamma);
  double gamma() const { return gamma_; }
  double operator()(double t) const;
  // int_a^b |t|^gamma dt in closed form.
  double integral(double a, double b) const;

 private:
  double gamma_;
};

ApClass ap_classify(double gamma, double p);

struct Interval {
  double lo;
  double hi;
};

// Max over the family of (avg w)(avg w^{-1/(p-1)})^{p-1}; nullopt when some average diverges.
std::optional<double> ap_constant_estimate(double gamma, double p, const std::vector<Interval>& family);

// int_a^b |t|^e dt for any real e; +inf when the integral diverges.
double power_integral(double a, double b, double e);

}  // namespace wtrace
