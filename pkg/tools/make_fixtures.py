"""Regenerate the bundled indicator-panel fixtures.

Writes src/paneldag/data/mini_wdi.csv (wide format, 40 economies x 12
indicators x years 1960-2020, pre-2000 sparsely reported) and
src/paneldag/data/emissions.csv (long format, the same 40 economies over
2000-2020). Per-capita emissions are generated as an additive nonlinear
function of urban population share and rural clean-cooking access, so the
fixture has a known pair of driver columns for end-to-end pipeline tests.

Deterministic: python3 tools/make_fixtures.py always reproduces the same bytes.
"""

import csv
import pathlib

import numpy as np

HERE = pathlib.Path(__file__).resolve().parent
DATA = HERE.parent / "src" / "paneldag" / "data"

SEED = 20260819
YEARS = list(range(1960, 2021))
WINDOW = list(range(2000, 2021))

ECONOMIES = [
    ("Angola", "AGO"),
    ("Argentina", "ARG"),
    ("Australia", "AUS"),
    ("Bangladesh", "BGD"),
    ("Brazil", "BRA"),
    ("Canada", "CAN"),
    ("Switzerland", "CHE"),
    ("Chile", "CHL"),
    ("China", "CHN"),
    ("Cameroon", "CMR"),
    ("Colombia", "COL"),
    ("Germany", "DEU"),
    ("Algeria", "DZA"),
    ("Egypt, Arab Rep.", "EGY"),
    ("Spain", "ESP"),
    ("Ethiopia", "ETH"),
    ("France", "FRA"),
    ("United Kingdom", "GBR"),
    ("Ghana", "GHA"),
    ("Indonesia", "IDN"),
    ("India", "IND"),
    ("Italy", "ITA"),
    ("Japan", "JPN"),
    ("Kenya", "KEN"),
    ("Korea, Rep.", "KOR"),
    ("Morocco", "MAR"),
    ("Mexico", "MEX"),
    ("Mozambique", "MOZ"),
    ("Nigeria", "NGA"),
    ("Netherlands", "NLD"),
    ("Pakistan", "PAK"),
    ("Peru", "PER"),
    ("Philippines", "PHL"),
    ("Poland", "POL"),
    ("Senegal", "SEN"),
    ("Thailand", "THA"),
    ("Turkiye", "TUR"),
    ("Tanzania", "TZA"),
    ("United States", "USA"),
    ("Viet Nam", "VNM"),
]

INDICATORS = [
    ("Access to clean fuels and technologies for cooking, rural (% of rural population)", "EG.CFT.ACCS.RU.ZS"),
    ("Access to clean fuels and technologies for cooking, urban (% of urban population)", "EG.CFT.ACCS.UR.ZS"),
    ("Access to electricity (% of population)", "EG.ELC.ACCS.ZS"),
    ("Electric power consumption (kWh per capita)", "EG.USE.ELEC.KH.PC"),
    ("Forest area (% of land area)", "AG.LND.FRST.ZS"),
    ("GDP per capita (constant 2015 US$)", "NY.GDP.PCAP.KD"),
    ("Industry (including construction), value added (% of GDP)", "NV.IND.TOTL.ZS"),
    ("Life expectancy at birth, total (years)", "SP.DYN.LE00.IN"),
    ("Population growth (annual %)", "SP.POP.GROW"),
    ("Population living in slums (% of urban population)", "EN.POP.SLUM.UR.ZS"),
    ("School enrollment, secondary (% gross)", "SE.SEC.ENRR"),
    ("Urban population (% of total population)", "SP.URB.TOTL.IN.ZS"),
]


def sigmoid(z):
    return 1.0 / (1.0 + np.exp(-z))


def build_series(rng):
    """Raw indicator values per (economy, indicator code, year)."""
    n_e, n_y = len(ECONOMIES), len(YEARS)
    tau = (np.array(YEARS) - 1960) / 60.0

    dev = rng.uniform(-1.5, 1.5, size=n_e)
    trend = rng.uniform(0.3, 1.2, size=n_e)
    phase = rng.uniform(0, 2 * np.pi, size=n_e)
    forest_base = rng.normal(0.0, 1.0, size=n_e)

    latent = (
        dev[:, None]
        + trend[:, None] * (2.2 * tau - 1.1)[None, :]
        + 0.25 * np.sin(2 * np.pi * 1.3 * tau[None, :] + phase[:, None])
    )

    def noise(scale):
        return rng.normal(0.0, scale, size=(n_e, n_y))

    series = {}
    series["SP.URB.TOTL.IN.ZS"] = 18.0 + 64.0 * sigmoid(0.9 * latent + noise(0.45))
    series["EG.CFT.ACCS.RU.ZS"] = 100.0 * sigmoid(1.1 * latent - 0.7 + noise(0.5))
    series["EG.CFT.ACCS.UR.ZS"] = 100.0 * sigmoid(1.0 * latent + 0.6 + noise(0.5))
    series["EG.ELC.ACCS.ZS"] = 100.0 * sigmoid(1.3 * latent + 0.9 + noise(0.5))
    series["EG.USE.ELEC.KH.PC"] = 350.0 * np.exp(1.1 * latent + noise(0.2))
    series["NY.GDP.PCAP.KD"] = 1800.0 * np.exp(0.9 * latent + noise(0.25))
    series["NV.IND.TOTL.ZS"] = 24.0 + 9.0 * np.tanh(0.6 * latent + noise(0.5))
    series["SP.DYN.LE00.IN"] = 62.0 + 11.0 * np.tanh(0.8 * latent + noise(0.3))
    series["SP.POP.GROW"] = 1.4 - 0.8 * np.tanh(0.8 * latent) + noise(0.25)
    series["AG.LND.FRST.ZS"] = 31.0 + 14.0 * np.tanh(0.5 * forest_base[:, None] + noise(0.2))
    series["SE.SEC.ENRR"] = 55.0 + 38.0 * sigmoid(1.2 * latent + noise(0.5))
    series["EN.POP.SLUM.UR.ZS"] = 45.0 - 22.0 * np.tanh(0.7 * latent + noise(0.4))

    # target: additive in urban share and rural clean-fuel access, with mild
    # multiplicative noise (keeps values positive and the mean additive)
    z_urb = (series["SP.URB.TOTL.IN.ZS"] - 50.0) / 18.0
    z_cfr = (series["EG.CFT.ACCS.RU.ZS"] - 50.0) / 30.0
    co2_mean = 0.3 + 3.8 * sigmoid(1.4 * z_urb + 0.3) + 2.6 * sigmoid(1.2 * z_cfr - 0.2)
    co2 = co2_mean * np.exp(0.10 * noise(1.0))
    return series, co2


def build_missing(rng):
    """Missing-cell mask per (economy index, indicator code, year index)."""
    n_e, n_y = len(ECONOMIES), len(YEARS)
    masks = {}
    for name, code in INDICATORS:
        mask = np.zeros((n_e, n_y), dtype=bool)
        if code == "EN.POP.SLUM.UR.ZS":
            # sparsely surveyed: even years from 2004 on, half the economies
            for e in range(n_e):
                for k, year in enumerate(YEARS):
                    surveyed = e % 2 == 0 and year >= 2004 and year % 2 == 0
                    mask[e, k] = not surveyed
        else:
            start = rng.integers(1962, 1998, size=n_e)
            holes = rng.random((n_e, n_y)) < 0.03
            for e in range(n_e):
                for k, year in enumerate(YEARS):
                    mask[e, k] = year < start[e] or holes[e, k]
                # anchor the window ends so interpolation always has support
                mask[e, YEARS.index(2000)] = False
                mask[e, YEARS.index(2020)] = False
        masks[code] = mask
    return masks


def write_wdi(series, masks, path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["Country Name", "Country Code", "Indicator Name", "Indicator Code"] + [str(y) for y in YEARS])
        for e, (e_name, e_code) in enumerate(ECONOMIES):
            for i_name, i_code in INDICATORS:
                row = [e_name, e_code, i_name, i_code]
                for k in range(len(YEARS)):
                    if masks[i_code][e, k]:
                        row.append("")
                    else:
                        row.append(f"{series[i_code][e, k]:.6g}")
                writer.writerow(row)


def write_emissions(co2, path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["code", "year", "value"])
        for e, (_, e_code) in enumerate(ECONOMIES):
            for year in WINDOW:
                writer.writerow([e_code, year, f"{co2[e, YEARS.index(year)]:.6g}"])


def main():
    rng = np.random.default_rng(SEED)
    series, co2 = build_series(rng)
    masks = build_missing(rng)
    DATA.mkdir(parents=True, exist_ok=True)
    write_wdi(series, masks, DATA / "mini_wdi.csv")
    write_emissions(co2, DATA / "emissions.csv")
    print(f"wrote {DATA / 'mini_wdi.csv'} and {DATA / 'emissions.csv'}")


if __name__ == "__main__":
    main()
