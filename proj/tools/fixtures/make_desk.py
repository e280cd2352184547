"""Writes data/north_sea/desk.json: three-zone desk case on 21 synthetic weather years."""
import json, math, random
random.seed(11)
def poly(lon, lat, r, n=9):
    pts = []
    for k in range(n):
        a = 2*math.pi*k/n
        rr = r * random.uniform(0.8, 1.1)
        dx, dy = rr*math.cos(a), rr*math.sin(a)*0.8
        pts.append([round(lon + dx/(111.195*math.cos(math.radians(lat))), 4), round(lat + dy/111.195, 4)])
    return pts
doc = {
 "name": "north-sea-desk",
 "zones": [
   {"id": "GB", "kind": "mainland", "landing_cap_gw": 6, "lon": -1.2, "lat": 53.6},
   {"id": "NL", "kind": "mainland", "landing_cap_gw": 6, "lon": 4.9, "lat": 52.4},
   {"id": "DE", "kind": "mainland", "landing_cap_gw": 6, "lon": 8.6, "lat": 53.4}],
 "sites": [
   {"id": "hornsea", "polygon": poly(1.9, 53.9, 14)},
   {"id": "ijmuiden_ver", "polygon": poly(3.8, 52.85, 14)},
   {"id": "german_bight", "polygon": poly(6.6, 54.4, 16)}],
 "arc_rule": {"max_length_km": 300, "offshore_to_offshore": True, "onshore_tail_km": 10},
 "ntc": [{"from": "GB", "to": "NL", "gw": 1.0}, {"from": "NL", "to": "DE", "gw": 5.0}, {"from": "GB", "to": "DE", "gw": 1.4}],
 "corridors": [{"from": "NL", "to": "DE", "max_added_gw": 4.0}],
 "units": [
   {"id": "GB_nuclear", "zone": "GB", "capacity_gw": 6.0, "efficiency": 0.33, "fuel": "nuclear", "om_cost": 9.0},
   {"id": "GB_gas", "zone": "GB", "capacity_gw": 30.0, "efficiency": 0.55, "fuel": "natural_gas", "om_cost": 2.0},
   {"id": "GB_coal", "zone": "GB", "capacity_gw": 3.0, "efficiency": 0.38, "fuel": "hard_coal", "om_cost": 3.0},
   {"id": "NL_gas", "zone": "NL", "capacity_gw": 15.0, "efficiency": 0.56, "fuel": "natural_gas", "om_cost": 2.0},
   {"id": "NL_coal", "zone": "NL", "capacity_gw": 4.0, "efficiency": 0.42, "fuel": "hard_coal", "om_cost": 3.0},
   {"id": "DE_lignite", "zone": "DE", "capacity_gw": 12.0, "efficiency": 0.38, "fuel": "lignite", "om_cost": 4.0},
   {"id": "DE_coal", "zone": "DE", "capacity_gw": 10.0, "efficiency": 0.42, "fuel": "hard_coal", "om_cost": 3.0},
   {"id": "DE_gas", "zone": "DE", "capacity_gw": 32.0, "efficiency": 0.55, "fuel": "natural_gas", "om_cost": 2.0},
   {"id": "DE_hydro", "zone": "DE", "capacity_gw": 2.0, "efficiency": 1.0, "fuel": "hydro", "om_cost": 1.0}],
 "renewables": {
   "GB": {"onshore_wind_gw": 14, "offshore_wind_gw": 14, "pv_gw": 14},
   "NL": {"onshore_wind_gw": 6, "offshore_wind_gw": 4, "pv_gw": 20},
   "DE": {"onshore_wind_gw": 60, "offshore_wind_gw": 8, "pv_gw": 70}},
 "weather": {
   "sites": [
     {"id": "off_hornsea", "lon": 1.9, "lat": 53.9, "offshore": True},
     {"id": "off_ijmuiden", "lon": 3.8, "lat": 52.85, "offshore": True},
     {"id": "off_bight", "lon": 6.6, "lat": 54.4, "offshore": True},
     {"id": "on_GB", "lon": -1.2, "lat": 53.6, "offshore": False},
     {"id": "on_NL", "lon": 4.9, "lat": 52.4, "offshore": False},
     {"id": "on_DE", "lon": 8.6, "lat": 53.4, "offshore": False}],
   "synthetic": {"years": 21, "seed": 2024, "speed_sigma": 2.0}},
 "power_curve": {"cut_in": 3.0, "rated": 12.0, "cut_out": 25.0},
 "load": {"synthetic": {"annual_twh": {"GB": 300, "NL": 120, "DE": 500}, "seed": 7}},
 "clustering": {"grid_spacing_km": 10, "max_dist_km": 70, "nrmse_tolerance": 0.10, "coarsen_stride": 24,
                "representative_topologies": 3},
 "sweep": {"multipliers": [1.0, 2.0, 3.0, 4.0]}
}
open("data/north_sea/desk.json", "w").write(json.dumps(doc, indent=1) + "\n")
