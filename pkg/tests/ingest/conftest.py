import pytest


@pytest.fixture
def data_dir(write_csv, tmp_path):
    """Three plants over four periods of one day with one TSO start."""
    write_csv(
        "positions.csv",
        """
        plant_id,date,period,level_mw
        T_B,2022-01-01,1,300
        T_B,2022-01-01,2,300
        T_B,2022-01-01,3,0
        T_A,2022-01-01,1,100
        T_A,2022-01-01,3,100
        T_A,2022-01-01,4,100
        T_C,2022-01-01,2,50
        T_C,2022-01-02,1,50
        """,
    )
    write_csv(
        "actions.csv",
        """
        plant_id,date,period,accepted_delta_mw
        T_C,2022-01-01,1,40
        T_C,2022-01-01,1,20
        T_B,2022-01-01,2,-300
        T_A,2022-01-01,3,10
        T_X,2022-01-01,1,10
        """,
    )
    write_csv(
        "market_inertia.csv",
        """
        date,period,inertia_gvas
        2022-01-01,1,150
        2022-01-01,2,160
        2022-01-01,3,140
        2022-01-01,4,141
        2022-01-01,5,142
        """,
    )
    write_csv(
        "outturn_inertia.csv",
        """
        date,period,inertia_gvas
        2022-01-01,1,152
        2022-01-01,2,158
        2022-01-01,3,140
        2022-01-01,4,141
        """,
    )
    write_csv(
        "demand.csv",
        """
        date,period,demand_gw
        2022-01-01,4,31
        2022-01-01,3,30
        2022-01-01,2,29
        2022-01-01,1,28
        """,
    )
    write_csv(
        "plants.csv",
        """
        plant_id,fuel,nameplate_mva
        T_A,CCGT,200
        T_B,coal,400
        T_C,hydro,60
        T_D,wind,100
        """,
    )
    return tmp_path
