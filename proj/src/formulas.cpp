#include "qtel/formulas.hpp"

#include "qtel/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qtel {

namespace {

using std::sqrt;

constexpr NoiseKind NON = NoiseKind::None;
constexpr NoiseKind BF = NoiseKind::BitFlip;
constexpr NoiseKind PF = NoiseKind::PhaseFlip;
constexpr NoiseKind DP = NoiseKind::Depolarizing;
constexpr NoiseKind AD = NoiseKind::AmplitudeDamping;

std::vector<Formula> build_registry() {
  std::vector<Formula> r;
  auto add = [&r](std::string name, NoiseKind in, NoiseKind al, NoiseKind bo,
                  FormulaVariant variant, std::vector<std::string> vars,
                  double (*fn)(const double*), const char* expr) {
    r.push_back(Formula{std::move(name), in, al, bo, variant, std::move(vars), fn, expr});
  };

  // ---- noise on the input qutrit only ----
  add("BF,non,non", BF, NON, NON, FormulaVariant::InputOnly, {"pI"},
      +[](const double* v) { return 1 - 4 * v[0] / 5; },
      "1 - 4 pI/5");
  add("PF,non,non", PF, NON, NON, FormulaVariant::InputOnly, {"pI"},
      +[](const double* v) { return 1 - 8 * v[0] / 15; },
      "1 - 8 pI/15");
  add("DP,non,non", DP, NON, NON, FormulaVariant::InputOnly, {"pI"},
      +[](const double* v) { return 1 - 3 * v[0] / 5; },
      "1 - 3 pI/5");
  add("AD,non,non", AD, NON, NON, FormulaVariant::InputOnly, {"pI"},
      +[](const double* v) { return -2 * v[0] / 5 + 4 * sqrt(1 - v[0]) / 15 + 11.0 / 15; },
      "-2 pI/5 + 4 sqrt(1-pI)/15 + 11/15");

  // ---- constant noise on the input, a second noise on Bob's qutrit ----
  add("BF,non,BF", BF, NON, BF, FormulaVariant::InputBob, {"pI", "pB"},
      +[](const double* v) {
        return 6 * v[0] * v[1] / 5 - 4 * v[0] / 5 - 4 * v[1] / 5 + 1;
      },
      "6 pI pB/5 - 4 pI/5 - 4 pB/5 + 1");
  add("BF,non,PF", BF, NON, PF, FormulaVariant::InputBob, {"pI", "pB"},
      +[](const double* v) {
        return 8 * v[0] * v[1] / 15 - 4 * v[0] / 5 - 8 * v[1] / 15 + 1;
      },
      "8 pI pB/15 - 4 pI/5 - 8 pB/15 + 1");
  add("BF,non,DP", BF, NON, DP, FormulaVariant::InputBob, {"pI", "pB"},
      +[](const double* v) {
        return 9 * v[0] * v[1] / 10 - 4 * v[0] / 5 - 3 * v[1] / 5 + 1;
      },
      "9 pI pB/10 - 4 pI/5 - 3 pB/5 + 1");
  add("BF,non,AD", BF, NON, AD, FormulaVariant::InputBob, {"pI", "pB"},
      +[](const double* v) {
        return 8 * v[0] * v[1] / 15 - 8 * v[0] / 15 - 2 * v[1] / 5 +
               4 * sqrt(1 - v[1]) / 15 - 4 * v[0] * sqrt(1 - v[1]) / 15 + 11.0 / 15;
      },
      "8 pI pB/15 - 8 pI/15 - 2 pB/5 + 4 sqrt(1-pB)/15 - 4 pI sqrt(1-pB)/15 + 11/15");
  add("PF,non,BF", PF, NON, BF, FormulaVariant::InputBob, {"pI", "pB"},
      +[](const double* v) {
        return 8 * v[0] * v[1] / 15 - 8 * v[0] / 15 - 4 * v[1] / 5 + 1;
      },
      "8 pI pB/15 - 8 pI/15 - 4 pB/5 + 1");
  add("PF,non,PF", PF, NON, PF, FormulaVariant::InputBob, {"pI", "pB"},
      +[](const double* v) {
        return 32 * v[0] * v[1] / 45 - 8 * v[0] / 15 - 8 * v[1] / 15 + 1;
      },
      "32 pI pB/45 - 8 pI/15 - 8 pB/15 + 1");
  add("PF,non,DP", PF, NON, DP, FormulaVariant::InputBob, {"pI", "pB"},
      +[](const double* v) {
        return 2 * v[0] * v[1] / 5 - 8 * v[0] / 15 - 3 * v[1] / 5 + 1;
      },
      "2 pI pB/5 - 8 pI/15 - 3 pB/5 + 1");
  add("PF,non,AD", PF, NON, AD, FormulaVariant::InputBob, {"pI", "pB"},
      +[](const double* v) {
        return 8 * v[0] * v[1] / 45 - 8 * v[0] / 45 - 2 * v[1] / 5 +
               4 * sqrt(1 - v[1]) / 15 - 16 * v[0] * sqrt(1 - v[1]) / 45 + 11.0 / 15;
      },
      "8 pI pB/45 - 8 pI/45 - 2 pB/5 + 4 sqrt(1-pB)/15 - 16 pI sqrt(1-pB)/45 + 11/15");
  add("DP,non,BF", DP, NON, BF, FormulaVariant::InputBob, {"pI", "pB"},
      +[](const double* v) {
        return 9 * v[0] * v[1] / 10 - 3 * v[0] / 5 - 4 * v[1] / 5 + 1;
      },
      "9 pI pB/10 - 3 pI/5 - 4 pB/5 + 1");
  add("DP,non,PF", DP, NON, PF, FormulaVariant::InputBob, {"pI", "pB"},
      +[](const double* v) {
        return 2 * v[0] * v[1] / 5 - 3 * v[0] / 5 - 8 * v[1] / 15 + 1;
      },
      "2 pI pB/5 - 3 pI/5 - 8 pB/15 + 1");
  add("DP,non,DP", DP, NON, DP, FormulaVariant::InputBob, {"pI", "pB"},
      +[](const double* v) {
        return 27 * v[0] * v[1] / 40 - 3 * v[0] / 5 - 3 * v[1] / 5 + 1;
      },
      "27 pI pB/40 - 3 pI/5 - 3 pB/5 + 1");
  add("DP,non,AD", DP, NON, AD, FormulaVariant::InputBob, {"pI", "pB"},
      +[](const double* v) {
        return v[0] * sqrt(1 - v[1]) / 15 - 2 * v[0] / 5 + 2 * v[1] * (v[0] - 1) / 5 +
               4 * (1 - v[0]) * sqrt(1 - v[1]) / 15 + 11.0 / 15;
      },
      "pI sqrt(1-pB)/15 - 2 pI/5 + 2 pB(pI-1)/5 + 4(1-pI) sqrt(1-pB)/15 + 11/15");
  add("AD,non,BF", AD, NON, BF, FormulaVariant::InputBob, {"pI", "pB"},
      +[](const double* v) {
        return 8 * v[0] * v[1] / 15 - 2 * v[0] / 5 - 4 * v[1] * sqrt(1 - v[0]) / 15 -
               8 * v[1] / 15 + 4 * sqrt(1 - v[0]) / 15 + 11.0 / 15;
      },
      "8 pI pB/15 - 2 pI/5 - 4 pB sqrt(1-pI)/15 - 8 pB/15 + 4 sqrt(1-pI)/15 + 11/15");
  add("AD,non,PF", AD, NON, PF, FormulaVariant::InputBob, {"pI", "pB"},
      +[](const double* v) {
        return 8 * v[0] * v[1] / 45 - 2 * v[0] / 5 - 16 * v[1] * sqrt(1 - v[0]) / 45 -
               8 * v[1] / 45 + 4 * sqrt(1 - v[0]) / 15 + 11.0 / 15;
      },
      "8 pI pB/45 - 2 pI/5 - 16 pB sqrt(1-pI)/45 - 8 pB/45 + 4 sqrt(1-pI)/15 + 11/15");
  add("AD,non,DP", AD, NON, DP, FormulaVariant::InputBob, {"pI", "pB"},
      +[](const double* v) {
        return 19 * v[0] * v[1] / 30 - 2 * v[0] / 5 - 7 * v[1] * v[1] / 30 -
               v[1] * sqrt(1 - v[0]) / 5 - 2 * v[1] / 5 + 4 * sqrt(1 - v[0]) / 15 +
               11.0 / 15;
      },
      "19 pI pB/30 - 2 pI/5 - 7 pB^2/30 - pB sqrt(1-pI)/5 - 2 pB/5 + 4 sqrt(1-pI)/15 "
      "+ 11/15");
  add("AD,non,AD", AD, NON, AD, FormulaVariant::InputBob, {"pI", "pB"},
      +[](const double* v) {
        const double si = sqrt(1 - v[0]), sb = sqrt(1 - v[1]);
        return 14 * v[0] * v[1] / 45 - 4 * v[0] * sb / 45 - 14 * v[0] / 45 -
               4 * v[1] * si / 45 - 14 * v[1] / 45 + 8 * si * sb / 45 + 4 * si / 45 +
               4 * sb / 45 + 29.0 / 45;
      },
      "14 pI pB/45 - 4 pI sqrt(1-pB)/45 - 14 pI/45 - 4 pB sqrt(1-pI)/45 - 14 pB/45 "
      "+ 8 sqrt(1-pI) sqrt(1-pB)/45 + 4 sqrt(1-pI)/45 + 4 sqrt(1-pB)/45 + 29/45");

  // ---- same noise on the input and Alice's channel qutrit (pI = pA = p) ----
  add("BF,BF,non", BF, BF, NON, FormulaVariant::AliceTied, {"p"},
      +[](const double* v) { return 6 * v[0] * v[0] / 5 - 8 * v[0] / 5 + 1; },
      "6 p^2/5 - 8 p/5 + 1");
  add("PF,PF,non", PF, PF, NON, FormulaVariant::AliceTied, {"p"},
      +[](const double* v) { return 32 * v[0] * v[0] / 45 - 16 * v[0] / 15 + 1; },
      "32 p^2/45 - 16 p/15 + 1");
  add("DP,DP,non", DP, DP, NON, FormulaVariant::AliceTied, {"p"},
      +[](const double* v) { return 27 * v[0] * v[0] / 40 - 6 * v[0] / 5 + 1; },
      "27 p^2/40 - 6 p/5 + 1");
  add("AD,AD,non", AD, AD, NON, FormulaVariant::AliceTied, {"p"},
      +[](const double* v) {
        return 14 * v[0] * v[0] / 45 - 8 * v[0] * sqrt(1 - v[0]) / 45 - 4 * v[0] / 5 +
               8 * sqrt(1 - v[0]) / 45 + 37.0 / 45;
      },
      "14 p^2/45 - 8 p sqrt(1-p)/45 - 4 p/5 + 8 sqrt(1-p)/45 + 37/45");

  add("BF,BF,BF", BF, BF, BF, FormulaVariant::AliceTied, {"p", "pB"},
      +[](const double* v) {
        return -9 * v[0] * v[0] * v[1] / 5 + 6 * v[0] * v[0] / 5 +
               12 * v[0] * v[1] / 5 - 8 * v[0] / 5 - 4 * v[1] / 5 + 1;
      },
      "-9 p^2 pB/5 + 6 p^2/5 + 12 p pB/5 - 8 p/5 - 4 pB/5 + 1");
  add("BF,BF,PF", BF, BF, PF, FormulaVariant::AliceTied, {"p", "pB"},
      +[](const double* v) {
        return -4 * v[0] * v[0] * v[1] / 5 + 6 * v[0] * v[0] / 5 +
               16 * v[0] * v[1] / 15 - 8 * v[0] / 5 - 8 * v[1] / 15 + 1;
      },
      "-4 p^2 pB/5 + 6 p^2/5 + 16 p pB/15 - 8 p/5 - 8 pB/15 + 1");
  add("BF,BF,DP", BF, BF, DP, FormulaVariant::AliceTied, {"p", "pB"},
      +[](const double* v) {
        return -27 * v[0] * v[0] * v[1] / 20 + 6 * v[0] * v[0] / 5 +
               9 * v[0] * v[1] / 5 - 8 * v[0] / 5 - 3 * v[1] / 5 + 1;
      },
      "-27 p^2 pB/20 + 6 p^2/5 + 9 p pB/5 - 8 p/5 - 3 pB/5 + 1");
  add("BF,BF,AD", BF, BF, AD, FormulaVariant::AliceTied, {"p", "pB"},
      +[](const double* v) {
        const double sb = sqrt(1 - v[1]);
        return -4 * v[0] * v[0] * v[1] / 5 + 2 * v[0] * v[0] * sb / 15 +
               4 * v[0] * v[0] / 5 + 16 * v[0] * v[1] / 15 - 8 * v[0] * sb / 15 -
               16 * v[0] / 15 - 2 * v[1] / 5 + 4 * sb / 15 + 11.0 / 15;
      },
      "-4 p^2 pB/5 + 2 p^2 sqrt(1-pB)/15 + 4 p^2/5 + 16 p pB/15 - 8 p sqrt(1-pB)/15 "
      "- 16 p/15 - 2 pB/5 + 4 sqrt(1-pB)/15 + 11/15");
  add("PF,PF,BF", PF, PF, BF, FormulaVariant::AliceTied, {"p", "pB"},
      +[](const double* v) {
        return -32 * v[0] * v[0] * v[1] / 45 + 32 * v[0] * v[0] / 45 +
               16 * v[0] * v[1] / 15 - 16 * v[0] / 15 - 4 * v[1] / 5 + 1;
      },
      "-32 p^2 pB/45 + 32 p^2/45 + 16 p pB/15 - 16 p/15 - 4 pB/5 + 1");
  add("PF,PF,PF", PF, PF, PF, FormulaVariant::AliceTied, {"p", "pB"},
      +[](const double* v) {
        return -16 * v[0] * v[0] * v[1] / 15 + 32 * v[0] * v[0] / 45 +
               68 * v[0] * v[1] / 45 - 16 * v[0] / 15 - 8 * v[1] / 15 + 1;
      },
      "-16 p^2 pB/15 + 32 p^2/45 + 68 p pB/45 - 16 p/15 - 8 pB/15 + 1");
  add("PF,PF,DP", PF, PF, DP, FormulaVariant::AliceTied, {"p", "pB"},
      +[](const double* v) {
        return -8 * v[0] * v[0] * v[1] / 15 + 32 * v[0] * v[0] / 45 +
               4 * v[0] * v[1] / 5 - 16 * v[0] / 15 - 3 * v[1] / 5 + 1;
      },
      "-8 p^2 pB/15 + 32 p^2/45 + 4 p pB/5 - 16 p/15 - 3 pB/5 + 1");
  add("PF,PF,AD", PF, PF, AD, FormulaVariant::AliceTied, {"p", "pB"},
      +[](const double* v) {
        const double sb = sqrt(1 - v[1]);
        return -16 * v[0] * v[0] * v[1] / 45 + 16 * v[0] * v[0] * sb / 45 +
               16 * v[0] * v[0] / 45 + 4 * v[0] * v[1] / 9 + 28 * v[0] * sb / 45 -
               4 * v[0] / 9 - 2 * v[1] / 5 + 4 * sb / 15 + 11.0 / 15;
      },
      "-16 p^2 pB/45 + 16 p^2 sqrt(1-pB)/45 + 16 p^2/45 + 4 p pB/9 "
      "+ 28 p sqrt(1-pB)/45 - 4 p/9 - 2 pB/5 + 4 sqrt(1-pB)/15 + 11/15");
  add("DP,DP,BF", DP, DP, BF, FormulaVariant::AliceTied, {"p", "pB"},
      +[](const double* v) {
        return -81 * v[0] * v[0] * v[1] / 80 + 27 * v[0] * v[0] / 40 +
               9 * v[0] * v[1] / 5 - 6 * v[0] / 5 - 4 * v[1] / 5 + 1;
      },
      "-81 p^2 pB/80 + 27 p^2/40 + 9 p pB/5 - 6 p/5 - 4 pB/5 + 1");
  add("DP,DP,PF", DP, DP, PF, FormulaVariant::AliceTied, {"p", "pB"},
      +[](const double* v) {
        return -9 * v[0] * v[0] * v[1] / 20 + 27 * v[0] * v[0] / 40 +
               4 * v[0] * v[1] / 5 - 6 * v[0] / 5 - 8 * v[1] / 15 + 1;
      },
      "-9 p^2 pB/20 + 27 p^2/40 + 4 p pB/5 - 6 p/5 - 8 pB/15 + 1");
  add("DP,DP,DP", DP, DP, DP, FormulaVariant::AliceTied, {"p", "pB"},
      +[](const double* v) {
        return -243 * v[0] * v[0] * v[1] / 320 + 27 * v[0] * v[0] / 40 +
               27 * v[0] * v[1] / 20 - 6 * v[0] / 5 - 3 * v[1] / 5 + 1;
      },
      "-243 p^2 pB/320 + 27 p^2/40 + 27 p pB/20 - 6 p/5 - 3 pB/5 + 1");
  add("DP,DP,AD", DP, DP, AD, FormulaVariant::AliceTied, {"p", "pB"},
      +[](const double* v) {
        const double sb = sqrt(1 - v[1]);
        return -9 * v[0] * v[0] * v[1] / 20 + 9 * v[0] * v[0] * sb / 40 +
               9 * v[0] * v[0] / 20 + 4 * v[0] * v[1] / 5 - 2 * v[0] * sb / 5 -
               4 * v[0] / 5 - 2 * v[1] / 5 + 4 * sb / 15 + 11.0 / 15;
      },
      "-9 p^2 pB/20 + 9 p^2 sqrt(1-pB)/40 + 9 p^2/20 + 4 p pB/5 - 2 p sqrt(1-pB)/5 "
      "- 4 p/5 - 2 pB/5 + 4 sqrt(1-pB)/15 + 11/15");
  add("AD,AD,BF", AD, AD, BF, FormulaVariant::AliceTied, {"p", "pB"},
      +[](const double* v) {
        const double s = sqrt(1 - v[0]);
        return -4 * v[0] * v[0] * v[1] / 9 + 14 * v[0] * v[0] / 45 +
               8 * v[0] * v[1] * s / 45 + 16 * v[0] * v[1] / 15 - 8 * v[0] * s / 45 -
               4 * v[0] / 5 - 8 * v[1] * s / 45 - 28 * v[1] / 45 + 8 * s / 45 +
               37.0 / 45;
      },
      "-4 p^2 pB/9 + 14 p^2/45 + 8 p pB sqrt(1-p)/45 + 16 p pB/15 - 8 p sqrt(1-p)/45 "
      "- 4 p/5 - 8 pB sqrt(1-p)/45 - 28 pB/45 + 8 sqrt(1-p)/45 + 37/45");
  add("AD,AD,PF", AD, AD, PF, FormulaVariant::AliceTied, {"p", "pB"},
      +[](const double* v) {
        const double s = sqrt(1 - v[0]);
        return -4 * v[0] * v[0] * v[1] / 45 + 14 * v[0] * v[0] / 45 +
               4 * v[0] * v[1] * s / 15 + 16 * v[0] * v[1] / 45 - 8 * v[0] * s / 45 -
               4 * v[0] / 5 - 4 * v[1] * s / 15 - 4 * v[1] / 15 + 8 * s / 45 +
               37.0 / 45;
      },
      "-4 p^2 pB/45 + 14 p^2/45 + 4 p pB sqrt(1-p)/15 + 16 p pB/45 - 8 p sqrt(1-p)/45 "
      "- 4 p/5 - 4 pB sqrt(1-p)/15 - 4 pB/15 + 8 sqrt(1-p)/45 + 37/45");
  add("AD,AD,DP", AD, AD, DP, FormulaVariant::AliceTied, {"p", "pB"},
      +[](const double* v) {
        const double s = sqrt(1 - v[0]);
        return -v[0] * v[0] * v[1] / 3 + 14 * v[0] * v[0] / 45 +
               2 * v[0] * v[1] * s / 15 + 4 * v[0] * v[1] / 5 - 8 * v[0] * s / 45 -
               4 * v[0] / 5 - 2 * v[1] * s / 15 - 7 * v[1] / 15 + 8 * s / 45 +
               37.0 / 45;
      },
      "-p^2 pB/3 + 14 p^2/45 + 2 p pB sqrt(1-p)/15 + 4 p pB/5 - 8 p sqrt(1-p)/45 "
      "- 4 p/5 - 2 pB sqrt(1-p)/15 - 7 pB/15 + 8 sqrt(1-p)/45 + 37/45");
  add("AD,AD,AD", AD, AD, AD, FormulaVariant::AliceTied, {"p", "pB"},
      +[](const double* v) {
        const double s = sqrt(1 - v[0]), sb = sqrt(1 - v[1]);
        return -26 * v[0] * v[0] * v[1] / 45 + 14 * v[0] * v[0] / 45 +
               4 * v[0] * v[1] * s / 45 + 8 * v[0] * v[1] / 9 - 4 * v[0] * s * sb / 45 -
               4 * v[0] * s / 45 - 28 * v[0] / 45 - 4 * v[1] * (1 - v[0]) / 45 -
               14 * v[1] / 45 + 4 * s * sb / 45 + 8 * (1 - v[0]) * sb / 45 +
               4 * s / 45 + 29.0 / 45;
      },
      "-26 p^2 pB/45 + 14 p^2/45 + 4 p pB sqrt(1-p)/45 + 8 p pB/9 "
      "- 4 p sqrt(1-p) sqrt(1-pB)/45 - 4 p sqrt(1-p)/45 - 28 p/45 - 4 pB(1-p)/45 "
      "- 14 pB/45 + 4 sqrt(1-p) sqrt(1-pB)/45 + 8(1-p) sqrt(1-pB)/45 + 4 sqrt(1-p)/45 "
      "+ 29/45");

  // ---- same noise on both channel qutrits (pA = pB = p) ----
  add("non,BF,BF", NON, BF, BF, FormulaVariant::ChannelTied, {"p"},
      +[](const double* v) { return 6 * v[0] * v[0] / 5 - 8 * v[0] / 5 + 1; },
      "6 p^2/5 - 8 p/5 + 1");
  add("non,PF,PF", NON, PF, PF, FormulaVariant::ChannelTied, {"p"},
      +[](const double* v) { return 4 * v[0] * v[0] / 5 - 16 * v[0] / 15 + 1; },
      "4 p^2/5 - 16 p/15 + 1");
  add("non,DP,DP", NON, DP, DP, FormulaVariant::ChannelTied, {"p"},
      +[](const double* v) { return 27 * v[0] * v[0] / 40 - 6 * v[0] / 5 + 1; },
      "27 p^2/40 - 6 p/5 + 1");
  add("non,AD,AD", NON, AD, AD, FormulaVariant::ChannelTied, {"p"},
      +[](const double* v) { return 2 * v[0] * v[0] / 3 - 16 * v[0] / 15 + 1; },
      "2 p^2/3 - 16 p/15 + 1");

  add("BF,BF,BF|ch", BF, BF, BF, FormulaVariant::ChannelTied, {"pI", "p"},
      +[](const double* v) {
        return -9 * v[1] * v[1] * v[0] / 5 + 6 * v[1] * v[1] / 5 +
               12 * v[1] * v[0] / 5 - 8 * v[1] / 5 - 4 * v[0] / 5 + 1;
      },
      "-9 p^2 pI/5 + 6 p^2/5 + 12 p pI/5 - 8 p/5 - 4 pI/5 + 1");
  add("PF,BF,BF", PF, BF, BF, FormulaVariant::ChannelTied, {"pI", "p"},
      +[](const double* v) {
        return -4 * v[1] * v[1] * v[0] / 5 + 6 * v[1] * v[1] / 5 +
               16 * v[1] * v[0] / 15 - 8 * v[1] / 5 - 8 * v[0] / 15 + 1;
      },
      "-4 p^2 pI/5 + 6 p^2/5 + 16 p pI/15 - 8 p/5 - 8 pI/15 + 1");
  add("DP,BF,BF", DP, BF, BF, FormulaVariant::ChannelTied, {"pI", "p"},
      +[](const double* v) {
        return -27 * v[1] * v[1] * v[0] / 20 + 6 * v[1] * v[1] / 5 +
               9 * v[1] * v[0] / 5 - 8 * v[1] / 5 - 3 * v[0] / 5 + 1;
      },
      "-27 p^2 pI/20 + 6 p^2/5 + 9 p pI/5 - 8 p/5 - 3 pI/5 + 1");
  add("AD,BF,BF", AD, BF, BF, FormulaVariant::ChannelTied, {"pI", "p"},
      +[](const double* v) {
        const double si = sqrt(1 - v[0]);
        return -4 * v[1] * v[1] * v[0] / 5 + 2 * v[1] * v[1] * si / 5 +
               4 * v[1] * v[1] / 5 + 16 * v[1] * v[0] / 15 - 8 * v[1] * si / 15 -
               16 * v[1] / 15 - 2 * v[0] / 5 + 4 * si / 15 + 11.0 / 15;
      },
      "-4 p^2 pI/5 + 2 p^2 sqrt(1-pI)/5 + 4 p^2/5 + 16 p pI/15 - 8 p sqrt(1-pI)/15 "
      "- 16 p/15 - 2 pI/5 + 4 sqrt(1-pI)/15 + 11/15");
  add("BF,PF,PF", BF, PF, PF, FormulaVariant::ChannelTied, {"pI", "p"},
      +[](const double* v) {
        return -4 * v[1] * v[1] * v[0] / 5 + 4 * v[1] * v[1] / 5 +
               16 * v[1] * v[0] / 15 - 16 * v[1] / 15 - 4 * v[0] / 5 + 1;
      },
      "-4 p^2 pI/5 + 4 p^2/5 + 16 p pI/15 - 16 p/15 - 4 pI/5 + 1");
  add("PF,PF,PF|ch", PF, PF, PF, FormulaVariant::ChannelTied, {"pI", "p"},
      +[](const double* v) {
        return -16 * v[1] * v[1] * v[0] / 15 + 4 * v[1] * v[1] / 5 +
               64 * v[1] * v[0] / 45 - 16 * v[1] / 15 - 8 * v[0] / 15 + 1;
      },
      "-16 p^2 pI/15 + 4 p^2/5 + 64 p pI/45 - 16 p/15 - 8 pI/15 + 1");
  add("DP,PF,PF", DP, PF, PF, FormulaVariant::ChannelTied, {"pI", "p"},
      +[](const double* v) {
        return -3 * v[1] * v[1] * v[0] / 5 + 4 * v[1] * v[1] / 5 +
               4 * v[1] * v[0] / 5 - 16 * v[1] / 15 - 3 * v[0] / 5 + 1;
      },
      "-3 p^2 pI/5 + 4 p^2/5 + 4 p pI/5 - 16 p/15 - 3 pI/5 + 1");
  add("AD,PF,PF", AD, PF, PF, FormulaVariant::ChannelTied, {"pI", "p"},
      +[](const double* v) {
        const double si = sqrt(1 - v[0]);
        return -4 * v[1] * v[1] * v[0] / 15 + 8 * v[1] * v[1] * si / 15 +
               4 * v[1] * v[1] / 15 + 16 * v[1] * v[0] / 45 - 32 * v[1] * si / 45 -
               16 * v[1] / 45 - 2 * v[0] / 5 + 4 * si / 15 + 11.0 / 15;
      },
      "-4 p^2 pI/15 + 8 p^2 sqrt(1-pI)/15 + 4 p^2/15 + 16 p pI/45 "
      "- 32 p sqrt(1-pI)/45 - 16 p/45 - 2 pI/5 + 4 sqrt(1-pI)/15 + 11/15");
  add("BF,DP,DP", BF, DP, DP, FormulaVariant::ChannelTied, {"pI", "p"},
      +[](const double* v) {
        return -81 * v[1] * v[1] * v[0] / 80 + 27 * v[1] * v[1] / 40 +
               9 * v[1] * v[0] / 5 - 6 * v[1] / 5 - 4 * v[0] / 5 + 1;
      },
      "-81 p^2 pI/80 + 27 p^2/40 + 9 p pI/5 - 6 p/5 - 4 pI/5 + 1");
  add("PF,DP,DP", PF, DP, DP, FormulaVariant::ChannelTied, {"pI", "p"},
      +[](const double* v) {
        return -9 * v[1] * v[1] * v[0] / 20 + 27 * v[1] * v[1] / 40 +
               4 * v[1] * v[0] / 5 - 6 * v[1] / 5 - 8 * v[0] / 15 + 1;
      },
      "-9 p^2 pI/20 + 27 p^2/40 + 4 p pI/5 - 6 p/5 - 8 pI/15 + 1");
  add("DP,DP,DP|ch", DP, DP, DP, FormulaVariant::ChannelTied, {"pI", "p"},
      +[](const double* v) {
        return -243 * v[1] * v[1] * v[0] / 320 + 27 * v[1] * v[1] / 40 +
               27 * v[1] * v[0] / 20 - 6 * v[1] / 5 - 3 * v[0] / 5 + 1;
      },
      "-243 p^2 pI/320 + 27 p^2/40 + 27 p pI/20 - 6 p/5 - 3 pI/5 + 1");
  add("AD,DP,DP", AD, DP, DP, FormulaVariant::ChannelTied, {"pI", "p"},
      +[](const double* v) {
        const double si = sqrt(1 - v[0]);
        return -9 * v[1] * v[1] * v[0] / 20 + 9 * v[1] * v[1] * si / 40 -
               2 * v[1] * si / 5 + 9 * v[1] * v[1] / 20 + 4 * v[1] * v[0] / 5 -
               4 * v[1] / 5 - 2 * v[0] / 5 + 4 * si / 15 + 11.0 / 15;
      },
      "-9 p^2 pI/20 + 9 p^2 sqrt(1-pI)/40 - 2 p sqrt(1-pI)/5 + 9 p^2/20 + 4 p pI/5 "
      "- 4 p/5 - 2 pI/5 + 4 sqrt(1-pI)/15 + 11/15");
  add("BF,AD,AD", BF, AD, AD, FormulaVariant::ChannelTied, {"pI", "p"},
      +[](const double* v) {
        return -14 * v[1] * v[1] * v[0] / 15 + 2 * v[1] * v[1] / 3 +
               4 * v[1] * v[0] / 3 - 16 * v[1] / 15 - 4 * v[0] / 5 + 1;
      },
      "-14 p^2 pI/15 + 2 p^2/3 + 4 p pI/3 - 16 p/15 - 4 pI/5 + 1");
  add("PF,AD,AD", PF, AD, AD, FormulaVariant::ChannelTied, {"pI", "p"},
      +[](const double* v) {
        return -8 * v[1] * v[1] * v[0] / 45 + 2 * v[1] * v[1] / 3 +
               16 * v[1] * v[0] / 45 - 16 * v[1] / 15 - 8 * v[0] / 15 + 1;
      },
      "-8 p^2 pI/45 + 2 p^2/3 + 16 p pI/45 - 16 p/15 - 8 pI/15 + 1");
  add("DP,AD,AD", DP, AD, AD, FormulaVariant::ChannelTied, {"pI", "p"},
      +[](const double* v) {
        return -7 * v[1] * v[1] * v[0] / 10 + 2 * v[1] * v[1] / 3 + v[1] * v[0] -
               16 * v[1] / 15 - 3 * v[0] / 5 + 1;
      },
      "-7 p^2 pI/10 + 2 p^2/3 + p pI - 16 p/15 - 3 pI/5 + 1");
  add("AD,AD,AD|ch", AD, AD, AD, FormulaVariant::ChannelTied, {"pI", "p"},
      +[](const double* v) {
        const double si = sqrt(1 - v[0]);
        return -26 * v[1] * v[1] * v[0] / 45 + 4 * v[1] * v[1] * si / 45 +
               26 * v[1] * v[1] / 45 + 32 * v[1] * v[0] / 45 - 16 * v[1] * si / 45 -
               32 * v[1] / 45 - 2 * v[0] / 5 + 4 * si / 15 + 11.0 / 15;
      },
      "-26 p^2 pI/45 + 4 p^2 sqrt(1-pI)/45 + 26 p^2/45 + 32 p pI/45 "
      "- 16 p sqrt(1-pI)/45 - 32 p/45 - 2 pI/5 + 4 sqrt(1-pI)/15 + 11/15");

  // ---- correlated amplitude damping on the channel (p1 = p2 = p) ----
  add("CAD", NON, NON, NON, FormulaVariant::Cad, {"p", "eta"},
      +[](const double* v) {
        const double p = v[0], eta = v[1];
        return -2 * eta * p * p / 3 + 16 * eta * p / 15 + 4 * eta * sqrt(1 - p) / 15 +
               2 * eta * (1 - p) / 15 - 2 * eta / 5 + 2 * p * p / 3 - 16 * p / 15 + 1;
      },
      "-2 eta p^2/3 + 16 eta p/15 + 4 eta sqrt(1-p)/15 + 2 eta(1-p)/15 - 2 eta/5 "
      "+ 2 p^2/3 - 16 p/15 + 1");

  return r;
}

}  // namespace

const char* to_string(FormulaVariant v) {
  switch (v) {
    case FormulaVariant::InputOnly: return "input-only";
    case FormulaVariant::InputBob: return "input+bob";
    case FormulaVariant::AliceTied: return "pI=pA=p";
    case FormulaVariant::ChannelTied: return "pA=pB=p";
    case FormulaVariant::Cad: return "cad";
  }
  return "?";
}

const std::vector<Formula>& formula_registry() {
  static const std::vector<Formula> reg = build_registry();
  return reg;
}

const Formula* find_formula(std::string_view name) {
  for (const Formula& f : formula_registry())
    if (f.name == name) return &f;
  return nullptr;
}

double closed_form(const Formula& f, const std::vector<double>& probs) {
  if (probs.size() != f.vars.size())
    throw std::invalid_argument("closed_form: " + f.name + " expects " +
                                std::to_string(f.vars.size()) + " variables, got " +
                                std::to_string(probs.size()));
  return f.closed(probs.data());
}

TeleportScenario scenario_for(const Formula& f, const std::vector<double>& probs) {
  if (probs.size() != f.vars.size())
    throw std::invalid_argument("scenario_for: arity mismatch for " + f.name);
  TeleportScenario s;
  switch (f.variant) {
    case FormulaVariant::InputOnly:
      s.input = NoiseSpec::of(f.input, probs[0]);
      break;
    case FormulaVariant::InputBob:
      s.input = NoiseSpec::of(f.input, probs[0]);
      s.bob = NoiseSpec::of(f.bob, probs[1]);
      break;
    case FormulaVariant::AliceTied:
      s.input = NoiseSpec::of(f.input, probs[0]);
      s.alice = NoiseSpec::of(f.alice, probs[0]);
      if (f.bob != NoiseKind::None) s.bob = NoiseSpec::of(f.bob, probs.at(1));
      break;
    case FormulaVariant::ChannelTied: {
      const double p = probs.back();
      if (f.input != NoiseKind::None) s.input = NoiseSpec::of(f.input, probs[0]);
      s.alice = NoiseSpec::of(f.alice, p);
      s.bob = NoiseSpec::of(f.bob, p);
      break;
    }
    case FormulaVariant::Cad:
      s.cad = CadParams{probs[1], probs[0], probs[0], false};
      break;
  }
  return s;
}

std::vector<VerifyRow> verify_formula(const Formula& f,
                                      const std::vector<double>& grid,
                                      const QuadratureSpec& q) {
  const size_t arity = f.vars.size();
  std::vector<std::vector<double>> points;
  if (arity == 1) {
    for (double x : grid) points.push_back({x});
  } else {
    for (double x : grid)
      for (double y : grid) points.push_back({x, y});
  }
  std::vector<VerifyRow> rows(points.size());
  parallel_for(points.size(), [&](size_t i) {
    VerifyRow& r = rows[i];
    r.formula = &f;
    r.point = points[i];
    r.simulated = average_fidelity(scenario_for(f, points[i]), q);
    r.closed = closed_form(f, points[i]);
    r.abs_diff = std::abs(r.simulated - r.closed);
    r.match = r.abs_diff <= kVerifyTol;
  });
  return rows;
}

std::vector<VerifyRow> verify_all(const std::vector<double>& grid,
                                  const QuadratureSpec& q) {
  const auto& reg = formula_registry();
  std::vector<std::vector<VerifyRow>> per(reg.size());
  parallel_for(reg.size(), [&](size_t i) {
    // verify_formula would nest parallel regions; evaluate points inline here.
    const Formula& f = reg[i];
    std::vector<std::vector<double>> points;
    if (f.vars.size() == 1) {
      for (double x : grid) points.push_back({x});
    } else {
      for (double x : grid)
        for (double y : grid) points.push_back({x, y});
    }
    for (auto& pt : points) {
      VerifyRow r;
      r.formula = &f;
      r.point = pt;
      r.simulated = average_fidelity(scenario_for(f, pt), q);
      r.closed = closed_form(f, pt);
      r.abs_diff = std::abs(r.simulated - r.closed);
      r.match = r.abs_diff <= kVerifyTol;
      per[i].push_back(std::move(r));
    }
  });
  std::vector<VerifyRow> out;
  for (auto& rows : per)
    for (auto& r : rows) out.push_back(std::move(r));
  return out;
}

std::set<std::string> discrepant_names(const std::vector<VerifyRow>& rows) {
  std::set<std::string> names;
  for (const VerifyRow& r : rows)
    if (!r.match) names.insert(r.formula->name);
  return names;
}

namespace {

std::string point_string(const Formula& f, const std::vector<double>& pt) {
  std::ostringstream os;
  for (size_t i = 0; i < pt.size(); ++i) {
    if (i) os << ", ";
    os << f.vars[i] << "=" << pt[i];
  }
  return os.str();
}

}  // namespace

void write_verify_report(std::ostream& os, const std::vector<VerifyRow>& rows) {
  os << "registry audit: simulated average fidelity vs reference expressions "
     << "(tolerance " << kVerifyTol << ")\n\n";
  const Formula* current = nullptr;
  double worst = 0.0;
  int mismatches = 0, points = 0;
  int total_match = 0, total_disc = 0;
  std::vector<const VerifyRow*> bad;

  auto flush = [&](void) {
    if (!current) return;
    os << (mismatches == 0 ? "match       " : "DISCREPANCY ") << current->name << "  ["
       << to_string(current->variant) << "]  points=" << points
       << "  worst|diff|=" << std::scientific << std::setprecision(2) << worst
       << std::defaultfloat << "\n";
    os << "    reference: " << current->expression << "\n";
    if (mismatches) {
      ++total_disc;
      for (const VerifyRow* r : bad)
        os << "    at " << point_string(*current, r->point) << ": simulated "
           << std::fixed << std::setprecision(12) << r->simulated << ", reference "
           << r->closed << ", |diff| " << std::scientific << std::setprecision(3)
           << r->abs_diff << std::defaultfloat << "\n";
    } else {
      ++total_match;
    }
  };

  for (const VerifyRow& r : rows) {
    if (r.formula != current) {
      flush();
      current = r.formula;
      worst = 0.0;
      mismatches = points = 0;
      bad.clear();
    }
    ++points;
    worst = std::max(worst, r.abs_diff);
    if (!r.match) {
      ++mismatches;
      bad.push_back(&r);
    }
  }
  flush();
  os << "\nsummary: " << total_match << " expressions match, " << total_disc
     << " discrepant\n";
}

CadProbeReport cad_eta_probe(const std::vector<double>& p_grid,
                             const std::vector<double>& eta_grid,
                             const QuadratureSpec& q) {
  const Formula* cad = find_formula("CAD");
  const Formula* uncorr = find_formula("non,AD,AD");
  CadProbeReport rep;
  rep.p_grid = p_grid;
  rep.eta_grid = eta_grid;
  rep.rows.resize(p_grid.size() * eta_grid.size());
  parallel_for(rep.rows.size(), [&](size_t i) {
    const double p = p_grid[i / eta_grid.size()];
    const double eta = eta_grid[i % eta_grid.size()];
    CadProbeRow& row = rep.rows[i];
    row.p = p;
    row.eta = eta;
    TeleportScenario s;
    s.cad = CadParams{eta, p, p, false};
    row.simulated = average_fidelity(s, q);
    row.registry_value = closed_form(*cad, {p, eta});
    row.uncorrelated_value = closed_form(*uncorr, {p});
  });
  return rep;
}

double CadProbeReport::eta_variation(double p) const {
  double lo = 1.0, hi = 0.0;
  bool seen = false;
  for (const CadProbeRow& r : rows) {
    if (r.p != p) continue;
    seen = true;
    lo = std::min(lo, r.simulated);
    hi = std::max(hi, r.simulated);
  }
  return seen ? hi - lo : 0.0;
}

void write_cad_report(std::ostream& os, const CadProbeReport& rep) {
  os << "correlated amplitude damping probe (p1 = p2 = p)\n";
  os << "simulated average fidelity against the correlated reference expression\n"
     << "and the uncorrelated (eta=0) reference, per grid point\n\n";
  os << std::setw(7) << "p" << std::setw(7) << "eta" << std::setw(17) << "simulated"
     << std::setw(17) << "ref(corr)" << std::setw(13) << "|diff|" << std::setw(17)
     << "ref(eta=0)" << "\n";
  for (const CadProbeRow& r : rep.rows) {
    os << std::setw(7) << std::defaultfloat << std::setprecision(3) << r.p
       << std::setw(7) << r.eta << std::setw(17) << std::fixed
       << std::setprecision(12) << r.simulated << std::setw(17) << r.registry_value
       << std::setw(13) << std::scientific << std::setprecision(2)
       << std::abs(r.simulated - r.registry_value) << std::setw(17) << std::fixed
       << std::setprecision(12) << r.uncorrelated_value << std::defaultfloat << "\n";
  }
  os << "\nadjudication:\n";
  for (double p : rep.p_grid) {
    const double var = rep.eta_variation(p);
    os << "  p=" << std::setprecision(3) << p << ": simulated fidelity "
       << (var <= 1e-9 ? "is independent of eta" : "varies with eta") << " (spread "
       << std::scientific << std::setprecision(3) << var << std::defaultfloat << ")\n";
  }
  os << "  the claim that the correlated channel's fidelity is eta-independent\n"
     << "  holds only where the spread above is ~0; elsewhere the simulation\n"
     << "  follows the full eta-dependent reference expression.\n";
}

const std::vector<OrderingRow>& ordering_table() {
  static const std::vector<OrderingRow> rows = {
      {'a', BF,
       {"BF,non,non", "BF,BF,BF", "BF,BF,non", "BF,non,BF", "non,BF,BF"},
       "<<=="},
      {'b', PF,
       {"PF,non,non", "PF,PF,PF", "PF,PF,non", "PF,non,PF", "non,PF,PF"},
       "<<=<"},
      {'c', DP,
       {"DP,non,non", "DP,DP,DP", "DP,DP,non", "DP,non,DP", "non,DP,DP"},
       "<<=="},
      {'d', AD,
       {"AD,non,non", "AD,AD,AD", "AD,non,AD", "AD,AD,non", "non,AD,AD"},
       "===<"},
  };
  return rows;
}

std::vector<RelationVerdict> evaluate_ordering_row(
    const OrderingRow& row, double p, const std::set<std::string>& flagged,
    const QuadratureSpec& q) {
  std::vector<double> values(row.chain.size());
  parallel_for(row.chain.size(), [&](size_t i) {
    const Formula* f = find_formula(row.chain[i]);
    if (!f) throw std::logic_error("ordering table references unknown formula");
    values[i] = average_fidelity(
        scenario_for(*f, std::vector<double>(f->vars.size(), p)), q);
  });
  std::vector<RelationVerdict> verdicts;
  for (size_t i = 0; i + 1 < row.chain.size(); ++i) {
    RelationVerdict v;
    v.lhs = row.chain[i];
    v.rhs = row.chain[i + 1];
    v.op = row.ops[i];
    v.lhs_value = values[i];
    v.rhs_value = values[i + 1];
    v.lhs_flagged = flagged.count(v.lhs) > 0;
    v.rhs_flagged = flagged.count(v.rhs) > 0;
    if (v.op == '=')
      v.holds = std::abs(v.lhs_value - v.rhs_value) <= kOrderingEqualityTol;
    else
      v.holds = v.rhs_value - v.lhs_value > kOrderingStrictMargin;
    verdicts.push_back(std::move(v));
  }
  return verdicts;
}

void write_ordering_report(std::ostream& os, const std::vector<double>& p_values,
                           const std::set<std::string>& flagged,
                           const QuadratureSpec& q) {
  os << "cross-combination ordering audit (values simulated; each chain reads\n"
     << "left to right with the stated relation between neighbours)\n";
  for (double p : p_values) {
    os << "\n== p = " << p << " ==\n";
    for (const OrderingRow& row : ordering_table()) {
      const auto verdicts = evaluate_ordering_row(row, p, flagged, q);
      int violated = 0;
      os << "row (" << row.label << ") " << to_string(row.kind) << ":\n";
      for (const RelationVerdict& v : verdicts) {
        os << "    " << std::setw(12) << v.lhs << " " << v.op << " " << std::setw(12)
           << v.rhs << "   " << std::fixed << std::setprecision(12) << v.lhs_value
           << (v.op == '=' ? " vs " : " vs ") << v.rhs_value << "  "
           << (v.holds ? "holds" : "VIOLATED") << std::defaultfloat;
        if (!v.holds) {
          ++violated;
          os << "  (adjudicated against simulation";
          if (v.lhs_flagged || v.rhs_flagged) {
            os << "; discrepant reference expression:";
            if (v.lhs_flagged) os << " " << v.lhs;
            if (v.rhs_flagged) os << " " << v.rhs;
          } else {
            os << "; reference expressions match, the published ordering itself "
                  "disagrees with simulation here";
          }
          os << ")";
        }
        os << "\n";
      }
      os << "  row verdict: "
         << (violated == 0 ? "all relations hold"
                           : std::to_string(violated) + " relation(s) violated")
         << "\n";
    }
  }
}

}  // namespace qtel
