"""Writes data/north_sea/north_sea_sites.json: irregular candidate-site polygons."""
import json, math, random
random.seed(7)
# (id, lon, lat, radius_km)
areas = [
 ("dogger_bank", 2.0, 54.8, 85), ("hornsea", 1.8, 53.85, 35), ("norfolk", 2.4, 53.2, 25),
 ("east_anglia", 2.6, 52.5, 30), ("borssele", 3.0, 51.7, 15), ("belgian_zone", 2.6, 51.55, 12),
 ("ijmuiden_ver", 3.8, 52.8, 30), ("hollandse_kust", 4.25, 52.35, 15), ("ten_noorden", 4.9, 53.7, 25),
 ("gemini", 6.0, 54.0, 25), ("german_bight", 6.6, 54.5, 40), ("entenschnabel", 5.4, 55.3, 45),
 ("horns_rev", 7.5, 55.5, 22), ("danish_north_sea", 6.6, 56.3, 55), ("sorlige_nordsjo", 4.9, 56.9, 38),
 ("utsira_nord", 4.5, 59.25, 18), ("firth_of_forth", -1.9, 56.4, 30), ("moray_firth", -2.9, 58.0, 22),
 ("berwick_bank", -1.0, 55.9, 20), ("teesside", 0.3, 54.8, 18), ("thames", 1.7, 51.65, 18),
 ("cenos", 2.7, 57.3, 30), ("norwegian_trench", 3.2, 58.4, 25),
]
sites = []
for sid, lon, lat, r in areas:
    n = 9
    pts = []
    for k in range(n):
        a = 2*math.pi*k/n
        rr = r * random.uniform(0.75, 1.15)
        dx, dy = rr*math.cos(a), rr*math.sin(a)*0.8
        plat = lat + dy/111.195
        plon = lon + dx/(111.195*math.cos(math.radians(lat)))
        pts.append([round(plon, 4), round(plat, 4)])
    sites.append({"id": sid, "power_density": 7.0, "polygon": pts})
doc = {
 "name": "north-sea-sites",
 "zones": [
   {"id": "GB", "kind": "mainland", "landing_cap_gw": 6, "lon": -1.5, "lat": 53.5},
   {"id": "NL", "kind": "mainland", "landing_cap_gw": 6, "lon": 5.3, "lat": 52.2},
   {"id": "BE", "kind": "mainland", "landing_cap_gw": 6, "lon": 4.5, "lat": 50.8},
   {"id": "DE", "kind": "mainland", "landing_cap_gw": 6, "lon": 9.0, "lat": 53.5},
   {"id": "DK", "kind": "mainland", "landing_cap_gw": 6, "lon": 9.0, "lat": 56.0},
   {"id": "NO", "kind": "mainland", "landing_cap_gw": 6, "lon": 6.5, "lat": 58.8}],
 "sites": sites,
 "clustering": {"grid_spacing_km": 10, "max_dist_km": 70}
}
open("data/north_sea/north_sea_sites.json", "w").write(json.dumps(doc, indent=1) + "\n")
