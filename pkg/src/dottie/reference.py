"""Published reference values checked by the verification suite."""

from fractions import Fraction

DOTTIE_32 = "0.73908513321516064165531208767387"
SIN_DOTTIE_12 = "0.673612029183"
TAN_DOTTIE_12 = "0.911413312094"

# first Kaplan coefficients as published; a_9 carries a misprint (233 for 223)
KAPLAN_PUBLISHED = {
    1: Fraction(-1, 4),
    3: Fraction(-1, 768),
    5: Fraction(-1, 61440),
    7: Fraction(-43, 165150720),
    9: Fraction(-233, 47563407360),
    11: Fraction(-60623, 669692775628800),
}

KAPLAN_CORRECTED = dict(KAPLAN_PUBLISHED)
KAPLAN_CORRECTED[9] = Fraction(-223, 47563407360)

# correct decimals claimed for each approximant
APPROXIMANT_DIGIT_CLAIMS = {"tangent": 3, "broukhis": 6, "hammond": 8}
