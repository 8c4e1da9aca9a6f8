// Copyright 2026 The Retrodictor Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "retro/demo.h"

#include <cmath>
#include <sstream>

#include "retro/records.h"
#include "retro/retrodict.h"

namespace retro {

namespace {

std::string show(const Conditional &c) {
    return format_probability(c.maybe());
}

std::string show(double x) {
    return format_probability(x);
}

std::string margenau() {
    const RetrodictionQuery q = margenau_query();
    const DiscrepancyReport d = margenau_discrepancy(q.rho, q.slot1, q.slot2_ket);
    std::ostringstream out;
    out << "Margenau counterexample (spin-1/2)\n"
        << "  preparation      rho = |z+><z+|\n"
        << "  earlier          P   = {|y+>, |y->},  |y+-> = (1, +-i)/sqrt2\n"
        << "  post-selected    q   = |z->\n"
        << "  asked            Prob(y+ | z-)\n\n"
        << "  naive Bayes denominator <z-|rho|z->             = " << show(unmeasured_probability(q.rho, q.slot2_ket))
        << "\n"
        << "  naive Bayes                                     = " << show(naive_bayes(q)) << "\n"
        << "  ABL retrodiction                                = " << show(abl_fine(q)) << "\n"
        << "  Bayes with the ignored observation explicit     = " << show(corrected_bayes(q)) << "\n"
        << "  oracle P(y+ at 1 | z- at 2), plan [P, Q]        = " << show(oracle_retrodiction(q)) << "\n\n"
        << "  naive marginal sum_s |<z-|y_s>|^2 <y_s|rho|y_s> = " << show(*d.naive_value) << "\n"
        << "  oracle P(M_P at 1 and z- at 2)                  = " << show(d.observed_oracle_value) << "\n"
        << "  Born probability of z- with nothing measured    = " << show(d.correct_value) << "\n"
        << "  gap                                             = " << show(*d.gap) << "\n\n"
        << "Plain Bayes divides by the probability of z- on the unmeasured system, which is\n"
        << "zero here although z- follows a y observation half the time. The marginal sum\n"
        << "that rescues the ABL result is not P(z-) at all: it is the probability of z-\n"
        << "after a complete y observation whose result was ignored. Both steps mislabel the\n"
        << "same event, and the two mistakes cancel in the final ratio.\n";
    return out.str();
}

std::string three_box() {
    const ThreeBoxInstance tb = three_box_instance();
    const ThreeBoxReport r = three_box_scenario();
    std::ostringstream out;
    out << "Three-box paradox\n"
        << "  preparation      |psi> = (1, 1, 1)/sqrt3\n"
        << "  post-selected    |phi> = (1, 1, -1)/sqrt3\n"
        << "  boxes            standard basis box1, box2, box3\n\n"
        << "  observe {box1, not box1}: P(box1)        = " << show(r.coarse_box1) << "   oracle "
        << show(r.coarse_box1_oracle) << "\n"
        << "  observe {box2, not box2}: P(box2)        = " << show(r.coarse_box2) << "   oracle "
        << show(r.coarse_box2_oracle) << "\n";
    for (std::size_t i = 0; i < r.fine.size(); ++i) {
        out << "  observe {box1, box2, box3}: P(" << tb.boxes.block(i).label << ")    = " << show(r.fine[i])
            << "   oracle " << show(r.fine_oracle[i]) << "\n";
    }
    out << "\nEach coarse observation certainly finds the particle in the box it asks about,\n"
        << "yet the complete observation spreads it evenly. The conditions differ: an\n"
        << "ignored {box_j, not box_j} observation is a different event from an ignored\n"
        << "complete box observation, so the two retrodictions need not agree.\n";
    return out.str();
}

std::string rotated() {
    const RotatedInstance ri = rotated_instance();
    const RotatedComparison c = rotated_basis_comparison(ri.rho, ri.p, ri.post, ri.fixed_label, ri.rotation);
    std::ostringstream out;
    out << "Rotated basis sharing one vector\n"
        << "  preparation      |psi> = (1, 1, 1)/sqrt3\n"
        << "  post-selected    |phi> = (1, 1, -1)/sqrt3\n"
        << "  P                box basis\n"
        << "  P'               box basis rotated by pi/4 in the box2/box3 plane; box1 kept\n\n"
        << "  ABL P(box1) under P    = " << show(c.value_p) << "   oracle " << show(c.oracle_p) << "\n"
        << "  ABL P(box1) under P'   = " << show(c.value_p_prime) << "   oracle " << show(c.oracle_p_prime) << "\n";
    if (c.value_p && c.value_p_prime) {
        out << "  gap                    = " << show(std::abs(c.value_p.value() - c.value_p_prime.value())) << "\n";
    }
    out << "\nThe event box1 is the same projector in both observations, but the ignored\n"
        << "complete observation it belongs to is not. Retrodicting box1 therefore depends\n"
        << "on which other outcomes were possible.\n";
    return out.str();
}

}  // namespace

UnknownDemo::UnknownDemo(const std::string &name)
    : std::invalid_argument("unknown demo '" + name + "' (available: margenau, three-box, rotated)") {
}

std::vector<std::string> demo_names() {
    return {"margenau", "three-box", "rotated"};
}

std::string render_demo(const std::string &name) {
    if (name == "margenau") {
        return margenau();
    }
    if (name == "three-box") {
        return three_box();
    }
    if (name == "rotated") {
        return rotated();
    }
    throw UnknownDemo(name);
}

}  // namespace retro
