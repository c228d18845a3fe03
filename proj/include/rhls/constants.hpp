#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "rhls/quadrature.hpp"

namespace rhls {

struct ConstantReport {
    int n;
    double lambda;
    double c_spherical;
    std::optional<double> c_closed_form;
    std::vector<std::pair<double, double>> inner_profile;  // (height, inner average)
    double error_estimate;
};

QuadratureSpec default_constant_spec();

// Normalized equator average of |xi - eta|^lambda for xi at the given height.
double inner_average(int n, double lambda, double height, const QuadratureSpec& spec = default_constant_spec());

ConstantReport c_spherical(int n, double lambda, const QuadratureSpec& spec = default_constant_spec());

double c_explicit_lambda2(int n);

struct AuxIntegrals {
    // Closed forms.
    double I_comp;
    double I_a2;
    double I_a3;
    // Quadrature counterparts; comp_moment is the |x|^2-weighted version of I_comp.
    double q_comp;
    double q_comp_moment;
    double q_a2;
    double q_a3;
};

AuxIntegrals aux_integrals(int n, const QuadratureSpec& spec = default_constant_spec());

// I_comp I_a3^{-1/n} I_a2^{-n/(n-1)}, the quotient at the lambda = 2 extremal pair.
double compose_aux(int n, double I_comp, double I_a2, double I_a3);

// Equator average of ln|xi - eta| (and of its square) at the given height.
double h_potential(int n, double height, const QuadratureSpec& spec = default_constant_spec());
double h_second_moment(int n, double height, const QuadratureSpec& spec = default_constant_spec());

double c_n_log(int n, const QuadratureSpec& spec = default_constant_spec());

double c_near_zero(int n, double lambda, const QuadratureSpec& spec = default_constant_spec());

// Planar log-HLS: f a probability density on the line, g one on the upper half plane.
using LineDensity = std::function<double(double)>;
using PlaneDensity = std::function<double(double y1, double y2)>;

struct LogHlsSpec {
    QuadratureSpec outer = QuadratureSpec{}.tol(1e-7, 1e-11);
    QuadratureSpec middle = QuadratureSpec{}.tol(1e-8, 1e-12);
    QuadratureSpec inner = QuadratureSpec{}.tol(1e-11, 1e-14);
};

struct LogHlsTerms {
    double entropy_f;  // int f ln f
    double entropy_g;  // int g ln g
    double cross;      // double integral f ln|x-y| g
    double constant;   // C_2
    double deficit;
};

LogHlsTerms loghls_terms(const LineDensity& f, const PlaneDensity& g, const LogHlsSpec& spec = {});
double loghls_deficit(const LineDensity& f, const PlaneDensity& g, const LogHlsSpec& spec = {});

// int f(x) ln|x - y| dx.
double log_potential(const LineDensity& f, double y1, double y2, const QuadratureSpec& spec);

// f = f0/|S^1| with f0 = 2/(1+x^2); g = c exp(-(4/|S^1|) int f0 ln|x-y| dx) with c
// fixed by unit mass, all by quadrature.
struct LogHlsPair {
    LineDensity f;
    PlaneDensity g;
    double g_normalizer;
};

LogHlsPair loghls_extremal_pair(const LogHlsSpec& spec = {});

}  // namespace rhls
