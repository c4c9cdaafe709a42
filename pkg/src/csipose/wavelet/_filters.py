"""Orthogonal wavelet filter banks.

Daubechies scaling filters (extremal-phase), normalized so the lowpass taps
sum to sqrt(2). The values were computed by spectral factorization at 60
decimal digits and rounded to float64, so orthonormality holds to machine
precision. The remaining three filters of each bank follow the standard
quadrature-mirror construction.
"""

import numpy as np

# Reconstruction lowpass (scaling) filters, natural order h[0]..h[L-1].
_SCALING = {
    "db1": [
        0.7071067811865476,
        0.7071067811865476,
    ],
    "db2": [
        0.48296291314453416,
        0.8365163037378079,
        0.2241438680420134,
        -0.12940952255126037,
    ],
    "db3": [
        0.33267055295008263,
        0.8068915093110925,
        0.45987750211849154,
        -0.13501102001025458,
        -0.08544127388202666,
        0.03522629188570953,
    ],
    "db4": [
        0.2303778133088965,
        0.7148465705529157,
        0.6308807679298589,
        -0.027983769416859854,
        -0.18703481171909309,
        0.030841381835560764,
        0.0328830116668852,
        -0.010597401785069032,
    ],
    "db5": [
        0.16010239797419293,
        0.6038292697971896,
        0.7243085284377729,
        0.13842814590132074,
        -0.24229488706638203,
        -0.032244869584638375,
        0.07757149384004572,
        -0.006241490212798274,
        -0.012580751999081999,
        0.0033357252854737712,
    ],
    "db6": [
        0.11154074335010947,
        0.49462389039845306,
        0.7511339080210954,
        0.31525035170919763,
        -0.22626469396543983,
        -0.12976686756726194,
        0.09750160558732304,
        0.027522865530305727,
        -0.03158203931748603,
        0.0005538422011614961,
        0.004777257510945511,
        -0.0010773010853084796,
    ],
    "db7": [
        0.07785205408500918,
        0.3965393194819173,
        0.7291320908462351,
        0.4697822874051931,
        -0.14390600392856498,
        -0.22403618499387498,
        0.07130921926683026,
        0.08061260915108308,
        -0.03802993693501441,
        -0.01657454163066688,
        0.01255099855609984,
        0.0004295779729213665,
        -0.0018016407040474908,
        0.00035371379997452024,
    ],
    "db8": [
        0.05441584224310401,
        0.31287159091429995,
        0.6756307362972898,
        0.5853546836542067,
        -0.015829105256349306,
        -0.2840155429615469,
        0.0004724845739132828,
        0.12874742662047847,
        -0.017369301001807547,
        -0.044088253930794755,
        0.013981027917398282,
        0.008746094047405777,
        -0.004870352993451574,
        -0.00039174037337694705,
        0.0006754494064505693,
        -0.00011747678412476953,
    ],
}

_SCALING["haar"] = _SCALING["db1"]


class FilterBank:
    """The four filters of one orthogonal wavelet family."""

    def __init__(self, family: str):
        try:
            rec_lo = np.asarray(_SCALING[family], dtype=np.float64)
        except KeyError:
            known = ", ".join(sorted(_SCALING))
            raise ValueError(f"unknown wavelet family {family!r}; known: {known}") from None
        self.family = family
        self.rec_lo = rec_lo
        self.dec_lo = rec_lo[::-1].copy()
        signs = np.where(np.arange(len(rec_lo)) % 2 == 0, 1.0, -1.0)
        self.rec_hi = signs * self.dec_lo
        self.dec_hi = self.rec_hi[::-1].copy()

    def __len__(self) -> int:
        return len(self.rec_lo)


def known_families() -> tuple[str, ...]:
    return tuple(sorted(_SCALING))
