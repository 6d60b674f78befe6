import json

import pytest


@pytest.fixture
def tiny_sources(tmp_path):
    """Hand-written four-country source files plus a mapping config."""

    def write(name: str, text: str) -> str:
        (tmp_path / name).write_text(text, encoding="utf-8")
        return name

    write(
        "prices.csv",
        "iso3,year,ecp\n"
        "AAA,2019,1.5\n"
        "AAA,2020,2.5\n"
        "BBB,2020,0.4\n",
    )
    write(
        "covariates.csv",
        "iso3,share,co2,fossil,gdp,industry\n"
        "AAA,40.0,5.0,60.0,30000,25.0\n"
        "BBB,30.0,4.0,50.0,20000,22.0\n"
        "CCC,20.0,3.0,,10000,20.0\n"
        "DDD,10.0,2.0,30.0,5000,18.0\n",
    )
    write(
        "governance.csv",
        "iso3,g1,g2,g3,g4,g5,g6\n"
        "AAA,80,82,84,86,88,90\n"
        "BBB,60,62,64,66,,\n"
        "CCC,40,42,,,,\n"
        "DDD,20,22,24,26,28,30\n",
    )
    write(
        "extras.csv",
        "iso3,pm25,aware,dmg\n"
        "AAA,10.0,90.0,1.0\n"
        "BBB,20.0,70.0,0.5\n"
        "CCC,30.0,,-0.5\n"
        "DDD,40.0,30.0,\n",
    )
    write(
        "regions.csv",
        "iso3,country,region\n"
        "AAA,Aaland,Europe\n"
        "BBB,Beeland,Asia\n"
        "CCC,Ceeland,Europe\n"
        "DDD,Deeland,Africa\n",
    )
    mapping = {
        "key_column": "iso3",
        "price": {"file": "prices.csv", "column": "ecp", "year_column": "year"},
        "columns": {
            "population_share": {"file": "covariates.csv", "column": "share"},
            "co2_per_capita": {"file": "covariates.csv", "column": "co2"},
            "fossil_share": {"file": "covariates.csv", "column": "fossil"},
            "gdp_per_capita": {"file": "covariates.csv", "column": "gdp"},
            "industry_share_gdp": {"file": "covariates.csv", "column": "industry"},
            "governance_mean": {"file": "governance.csv", "columns": ["g1", "g2", "g3", "g4", "g5", "g6"]},
            "air_pollution": {"file": "extras.csv", "column": "pm25"},
            "cc_awareness": {"file": "extras.csv", "column": "aware"},
            "damages_per_capita": {"file": "extras.csv", "column": "dmg"},
        },
        "region_table": "regions.csv",
    }
    config = tmp_path / "mapping.json"
    config.write_text(json.dumps(mapping, indent=2), encoding="utf-8")
    return config
