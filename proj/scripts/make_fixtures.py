#!/usr/bin/env python3
"""Regenerates the synthetic desk-scale fixtures under data/fixtures/.

Three countries (Germany, Jordan, Sweden), April 2020. The values are
constructed, not real: Sweden keeps facial coverings at 0 throughout,
Germany carries the largest healthcare/vaccine investment totals and the
highest testing-policy average, and German case counts follow the facial
coverings level with a three-day delay so the lag analysis has an exact
signal to find.
"""

import csv
import datetime
import os

HERE = os.path.dirname(os.path.abspath(__file__))
OUT = os.path.join(HERE, "..", "data", "fixtures")

START = datetime.date(2020, 4, 1)

COUNTRIES = [
    ("Germany", "DEU", "DE", 83019213, "Europe"),
    ("Jordan", "JOR", "JO", 10101697, "Asia"),
    ("Sweden", "SWE", "SE", 10230185, "Europe"),
]

OXCGRT_HEADER = [
    "CountryName", "CountryCode", "Date",
    "C1_School closing", "C1_Flag",
    "C2_Workplace closing", "C2_Flag",
    "C3_Cancel public events", "C3_Flag",
    "C4_Restrictions on gatherings", "C4_Flag",
    "C5_Close public transport", "C5_Flag",
    "C6_Stay at home requirements", "C6_Flag",
    "C7_Restrictions on internal movement", "C7_Flag",
    "C8_International travel controls",
    "E1_Income support", "E1_Flag",
    "E2_Debt/contract relief",
    "E3_Fiscal measures",
    "E4_International support",
    "H1_Public information campaigns", "H1_Flag",
    "H2_Testing policy",
    "H3_Contact tracing",
    "H4_Emergency investment in healthcare",
    "H5_Investment in vaccines",
    "H6_Facial Coverings", "H6_Flag",
    "M1_Wildcard",
    "StringencyIndex", "GovernmentResponseIndex",
    "ContainmentHealthIndex", "EconomicSupportIndex",
]


def h6_germany(i):
    if i <= 6:
        return 1
    if i <= 18:
        return 2
    return 3


def indicators(code, i):
    """Per-country indicator values for day i (1-based)."""
    if code == "DEU":
        return {
            "c1": 3 if i <= 15 else 2, "c2": 2, "c3": 2, "c4": 4, "c5": 1,
            "c6": 2, "c7": 1, "c8": 3,
            "e1": 2, "e2": 1,
            "e3": "50000.25" if i == 10 else "0",
            "e4": "1000" if i == 20 else "0",
            "h1": 2,
            "h2": 2 if i <= 15 else 3,
            "h3": 2,
            "h4": f"{900.5 + 10 * i:.1f}",
            "h5": str(400 + 5 * i),
            "h6": h6_germany(i),
            "si": "73.15" if i <= 15 else "70.37",
            "gri": "65.5", "chi": "68.75", "esi": "50",
        }
    if code == "JOR":
        return {
            "c1": 3, "c2": 3, "c3": 2, "c4": 4, "c5": 2,
            "c6": 3 if i <= 20 else 2, "c7": 2, "c8": 4,
            "e1": 1, "e2": 1,
            "e3": "500.5" if i == 5 else "0",
            "e4": "2500" if i == 15 else "0",
            "h1": 2, "h2": 1, "h3": 1,
            "h4": str(200 + 5 * i),
            "h5": str(100 + 2 * i),
            "h6": 2,
            "si": "80.09", "gri": "72.3", "chi": "75.46", "esi": "37.5",
        }
    return {  # SWE
        "c1": 1, "c2": 1, "c3": 1, "c4": 3, "c5": 0,
        "c6": 0, "c7": 0, "c8": 2,
        "e1": 1, "e2": 0,
        "e3": "300.75" if i == 8 else "0",
        "e4": "750" if i == 25 else "0",
        "h1": 2,
        "h2": 1 if i <= 15 else 2,
        "h3": 1,
        "h4": str(150 + 5 * i),
        "h5": str(80 + i),
        "h6": 0,
        "si": "40.74", "gri": "45.2", "chi": "48.61", "esi": "25",
    }


def flag(value, general=1):
    """OxCGRT leaves the flag blank while the indicator is 0."""
    return "" if int(float(value)) == 0 else str(general)


def oxcgrt_rows(days):
    rows = []
    for name, code, _, _, _ in COUNTRIES:
        for i in range(1, days + 1):
            d = START + datetime.timedelta(days=i - 1)
            v = indicators(code, i)
            rows.append([
                name, code, d.strftime("%Y%m%d"),
                v["c1"], flag(v["c1"]),
                v["c2"], flag(v["c2"]),
                v["c3"], flag(v["c3"]),
                v["c4"], flag(v["c4"]),
                v["c5"], flag(v["c5"], general=0),
                v["c6"], flag(v["c6"]),
                v["c7"], flag(v["c7"]),
                v["c8"],
                v["e1"], flag(v["e1"]),
                v["e2"],
                v["e3"],
                v["e4"],
                v["h1"], flag(v["h1"]),
                v["h2"],
                v["h3"],
                v["h4"],
                v["h5"],
                v["h6"], flag(v["h6"]),
                "",  # M1_Wildcard: never coded in the fixture
                v["si"], v["gri"], v["chi"], v["esi"],
            ])
    return rows


def cases(code, i):
    if code == "DEU":
        lagged = h6_germany(i - 3) if i > 3 else h6_germany(1)
        return 50 + 10 * lagged
    if code == "JOR":
        return 30 + (i % 5)
    return 40 + 2 * i  # SWE


def ecdc_rows(days):
    rows = []
    for name, code, geo, pop, continent in COUNTRIES:
        for i in range(1, days + 1):
            d = START + datetime.timedelta(days=i - 1)
            c = cases(code, i)
            rows.append([
                d.strftime("%Y%m%d"), d.day, d.month, d.year,
                c, max(1, c // 10), name, geo, code, pop, continent,
            ])
    return rows


ILO_VALUES = {
    "DEU": [("2020Q1", "3.8", "2.0"), ("2020Q2", "4.2", "11.5"), ("2020Q3", "4.5", "4.8")],
    "JOR": [("2020Q1", "19.0", "3.1"), ("2020Q2", "23.0", "18.2"), ("2020Q3", "23.9", "9.0")],
    "SWE": [("2020Q1", "7.1", "1.5"), ("2020Q2", "8.7", "8.3"), ("2020Q3", "9.2", "3.9")],
}


def write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    print(f"wrote {path} ({len(rows)} rows)")


def main():
    os.makedirs(OUT, exist_ok=True)
    write_csv(os.path.join(OUT, "oxcgrt_3x30.csv"), OXCGRT_HEADER, oxcgrt_rows(30))
    write_csv(os.path.join(OUT, "oxcgrt_3x10.csv"), OXCGRT_HEADER, oxcgrt_rows(10))
    ecdc_header = [
        "dateRep", "day", "month", "year", "cases", "deaths",
        "countriesAndTerritories", "geoId", "countryterritoryCode",
        "popData2019", "continentExp",
    ]
    write_csv(os.path.join(OUT, "ecdc_3x30.csv"), ecdc_header, ecdc_rows(30))
    ilo_header = ["ref_area", "country_name", "time", "unemployment_rate", "working_hours_lost"]
    ilo_rows = []
    for name, code, _, _, _ in COUNTRIES:
        for time, unemp, hours in ILO_VALUES[code]:
            ilo_rows.append([code, name, time, unemp, hours])
    write_csv(os.path.join(OUT, "ilo_quarterly.csv"), ilo_header, ilo_rows)


if __name__ == "__main__":
    main()
