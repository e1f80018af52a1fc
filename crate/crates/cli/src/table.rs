//! Plain-text rendering of plan outcomes. Shows the report fields as they
//! are; nothing is recomputed here.

use std::fmt::Write;

use routeplan_core::money;
use routeplan_core::plan::PlanOutcome;

fn kv(out: &mut String, key: &str, value: impl std::fmt::Display) {
    let _ = writeln!(out, "  {key:<30} {value}");
}

pub fn render(outcomes: &[PlanOutcome]) -> String {
    let mut out = String::new();
    for (i, o) in outcomes.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let status = serde_json::to_value(o.status).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
        let _ = writeln!(out, "== {} ({status})", o.model.as_str());
        if let Some(d) = &o.diagnostic {
            kv(&mut out, "max_flow", d.max_flow);
            kv(&mut out, "max_flow_without_budget", d.max_flow_without_budget);
            kv(&mut out, "demand_total", d.demand_total);
            if let Some(c) = &d.infeasible_constraint {
                kv(&mut out, "infeasible_constraint", c);
            }
            kv(&mut out, "message", &d.message);
        }
        let Some(r) = &o.report else { continue };
        kv(&mut out, "total_transported", r.total_transported);
        kv(&mut out, "demand_total", r.demand_total);
        kv(&mut out, "satisfaction", r.satisfaction);
        kv(&mut out, "modal_split.commercial", r.modal_split.commercial);
        kv(&mut out, "modal_split.general_aviation", r.modal_split.general_aviation);
        kv(&mut out, "modal_split.direct", r.modal_split.direct);
        kv(&mut out, "spend.fares", money::format(r.spend.fares));
        kv(&mut out, "spend.ride_hail", money::format(r.spend.ride_hail));
        kv(&mut out, "spend.total", money::format(r.spend.total));
        let x = &r.excess;
        kv(&mut out, "excess.budget_unused", money::format(x.budget_unused));
        kv(&mut out, "excess.budget_unused_effective", money::format(x.budget_unused_effective));
        kv(&mut out, "excess.ga_seats_unused", x.ga_seats_unused);
        kv(&mut out, "excess.aircraft_unused", x.aircraft_unused);
        for (k, v) in &x.origin_vehicles_unused {
            kv(&mut out, &format!("excess.origin_vehicles[{k}]"), v);
        }
        for (k, v) in &x.destination_vehicles_unused {
            kv(&mut out, &format!("excess.destination_vehicles[{k}]"), v);
        }
        for leg in &x.commercial_seats_unused {
            kv(&mut out, &format!("excess.seats[{}>{}]", leg.origin_airport, leg.dest_airport), leg.seats);
        }
        for (k, v) in &x.clinic_capacity_unused {
            kv(&mut out, &format!("excess.clinic_capacity[{k}]"), v);
        }
        for (k, v) in &r.per_county {
            kv(&mut out, &format!("per_county[{k}]"), v);
        }
        for (k, v) in &r.per_clinic {
            kv(&mut out, &format!("per_clinic[{k}]"), v);
        }
    }
    out
}
