#pragma once

// Hand-built proofs shared across test suites.

#include "mallnet/net.hpp"
#include "mallnet/proof.hpp"

namespace fixtures {

using namespace mallnet;

// The worked translation example: a proof of  (P * P) | ~P, ~P & (~P + Q)
// ending parr over with over two tensors, whose net has two linkings of two
// links each and never touches the Q leaf.
inline Proof figure_one() {
    Proof ax_brown = build::ax("P");
    Proof ax_blue = build::ax("P");
    Proof ax_red = build::ax("P");
    Proof ax_green = build::ax("P");

    Sequent tl = parse_sequent("P * P, ~P, ~P");
    Proof tensor_left = build::tensor(tl, 0, {2}, ax_brown, ax_blue);

    Sequent plus_c = parse_sequent("P, ~P + Q");
    Proof plus = build::plus1(plus_c, 1, ax_red);
    Sequent tr = parse_sequent("P * P, ~P, ~P + Q");
    Proof tensor_right = build::tensor(tr, 0, {1}, plus, ax_green);

    Sequent wc = parse_sequent("P * P, ~P, ~P & (~P + Q)");
    Proof w = build::with(wc, 2, tensor_left, tensor_right);

    Sequent root = parse_sequent("(P * P) | ~P, ~P & (~P + Q)");
    return build::parr(root, 0, w);
}

// First introduction example, left proof:  tensor below plus2.
//   P, ~P        Q, ~Q
//   ------       ----------- plus2
//                Q, R + ~Q
//   ------------------------ tensor
//   ~P, P * Q, R + ~Q
inline Proof intro_example1_left() {
    Proof axp = build::ax(Formula::atom("P", true), Formula::atom("P"));
    Proof axq = build::ax("Q");
    Proof plus = build::plus2(parse_sequent("Q, R + ~Q"), 1, axq);
    return build::tensor(parse_sequent("~P, P * Q, R + ~Q"), 1, {2}, axp, plus);
}

// ... and the right proof: plus2 below tensor.
inline Proof intro_example1_right() {
    Proof axp = build::ax(Formula::atom("P", true), Formula::atom("P"));
    Proof axq = build::ax("Q");
    Proof tensor = build::tensor(parse_sequent("~P, P * Q, ~Q"), 1, {2}, axp, axq);
    return build::plus2(parse_sequent("~P, P * Q, R + ~Q"), 2, tensor);
}

// Second introduction example, left proof: tensor below with (the with-rule
// can be pulled under the tensor only by duplicating the left subproof).
//   ~P, P                    ~Q, Q    ~Q, Q
//   ----------- plus1        -------------- with
//   ~P, P + R                ~Q, Q & Q
//   ------------------------------------------- tensor
//   ~P, (P + R) * ~Q, Q & Q
inline Proof intro_example2_left() {
    Proof axp = build::ax(Formula::atom("P", true), Formula::atom("P"));
    Proof plus = build::plus1(parse_sequent("~P, P + R"), 1, axp);
    Proof axq1 = build::ax(Formula::atom("Q", true), Formula::atom("Q"));
    Proof axq2 = build::ax(Formula::atom("Q", true), Formula::atom("Q"));
    Proof w = build::with(parse_sequent("~Q, Q & Q"), 1, axq1, axq2);
    return build::tensor(parse_sequent("~P, (P + R) * ~Q, Q & Q"), 1, {2}, plus, w);
}

inline Proof intro_example2_right() {
    auto branch = [] {
        Proof axp = build::ax(Formula::atom("P", true), Formula::atom("P"));
        Proof plus = build::plus1(parse_sequent("~P, P + R"), 1, axp);
        Proof axq = build::ax(Formula::atom("Q", true), Formula::atom("Q"));
        return build::tensor(parse_sequent("~P, (P + R) * ~Q, Q"), 1, {2}, plus, axq);
    };
    return build::with(parse_sequent("~P, (P + R) * ~Q, Q & Q"), 2, branch(), branch());
}

// A proof with a with-rule inside one branch of another with-rule
// (three &-resolutions in total).
inline Proof nested_with() {
    Proof inner = build::with(parse_sequent("P, ~P & ~P"), 1, build::ax("P"), build::ax("P"));
    return build::with(parse_sequent("P, ~P & (~P & ~P)"), 1, build::ax("P"), inner);
}

}  // namespace fixtures
