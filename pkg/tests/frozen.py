"""Expected values fixed before the implementation was run against them."""

# ε totals as printed in the tables; E8 is the one row whose printed total is off
PRINTED_EPSILON = {
    "A1^1": 0, "A2^1": -1, "A3^1": -2, "A4^1": -3, "A5^1": -4, "A6^1": -5,
    "C2^1": -1, "C3^1": -2, "C4^1": -3, "D4^1": -4, "D5^1": -6,
    "E6^1": -10, "E7^1": -16, "E8^1": -16, "F4^1": -7, "G2^1": -2,
    "A3^2": -2, "A4^2": -1, "D3^2": -2, "D4^3": -4, "E6^2": -10,
}
COMPUTED_EPSILON_E8 = -28

TABLE_TYPES = tuple(PRINTED_EPSILON)
UNTWISTED_TYPES = tuple(t for t in TABLE_TYPES if t.endswith("^1"))
TWISTED_TYPES = tuple(t for t in TABLE_TYPES if not t.endswith("^1"))

COXETER = {"A1": 2, "A2": 3, "A3": 4, "A4": 5, "A5": 6, "A6": 7, "C2": 4, "C3": 6, "C4": 8,
           "D4": 6, "D5": 8, "E6": 12, "E7": 18, "E8": 30, "F4": 12, "G2": 6}

# scalar in front of (gamma K_theta^-1 - gamma^-1 K_theta)/(q - q^-1) in [X^-, X^+]
LAMBDA = {"A1^1": "1", "A2^1": "-q^-1", "A3^1": "q^-2", "C2^1": "1 + 2*q^-1 + q^-2"}
PAPER_LAMBDA = {"A2^1": "q^-2", "A3^1": "-q^-3", "C2^1": "q^(-1/2) + q^(-3/2)"}

# constant a in the f_0 image: printed and forced by [e_0, f_0]
A_PRINTED = {"A2^1": "1", "C2^1": "q^(1/2) + q^(-1/2)", "A3^2": "-2", "D4^3": "3"}
A_REQUIRED = {"A2^1": "1", "C2^1": "-q/(q^2 + 2*q + 1)", "A3^2": "-1/2", "D4^3": "1/3"}

# A2 inverse formulas: (target, constant)
STEP2_A2 = [("a_1(1)", "1"), ("a_1(-1)", "1"), ("x-_1(1)", "1"), ("x+_1(-1)", "-1")]

CORPUS = ("a3_case1", "a3_case2", "a3_case3_chain", "a3_case3",
          "an_serre_e0_f_n2", "an_e0_x2_n2", "an_e1e0e0_n2",
          "an_serre_e0_f_n3", "an_e0_x2_n3", "an_e1e0e0_n3",
          "an_e0f0_n1", "an_e0f0_n2", "an_e0f0_n3", "c2_e0f0")
