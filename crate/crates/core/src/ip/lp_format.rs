//! Plain-text dump of an [`IntegerProgram`] for offline inspection.
//!
//! The layout follows the familiar CPLEX LP style:
//!
//! ```text
//! file        := header sense objective "Subject To" row* "Bounds" bound* "General" names "End"
//! header      := "\ " free text NEWLINE
//! sense       := ("Maximize" | "Minimize") NEWLINE
//! objective   := " obj:" term* NEWLINE
//! row         := " " label ":" term+ " " rel " " number NEWLINE
//! term        := " " ("+" | "-") " " number " " name
//! rel         := "<=" | "=" | ">="
//! bound       := " " number " <= " name " <= " number NEWLINE   (finite upper)
//!              | " " name " >= " number NEWLINE                 (no upper)
//! names       := (" " name)* NEWLINE
//! ```
//!
//! Numbers use Rust's shortest round-trip `f64` formatting. Labels and names
//! are written verbatim, so they may contain brackets and commas. Rows appear
//! in program order, including empty rows (written with no terms).

use std::fmt::Write;

use super::{IntegerProgram, Sense, VarId};

pub fn to_lp_string(ip: &IntegerProgram) -> String {
    let mut out = String::new();
    out.push_str("\\ integer program\n");
    out.push_str(match ip.objective.sense {
        Sense::Maximize => "Maximize\n",
        Sense::Minimize => "Minimize\n",
    });
    out.push_str(" obj:");
    write_terms(&mut out, ip, &ip.objective.coefficients);
    out.push('\n');
    out.push_str("Subject To\n");
    for c in &ip.constraints {
        let _ = write!(out, " {}:", c.label);
        write_terms(&mut out, ip, &c.coefficients);
        let _ = writeln!(out, " {} {}", c.relation, c.rhs);
    }
    out.push_str("Bounds\n");
    for v in &ip.variables {
        match v.upper {
            Some(u) => {
                let _ = writeln!(out, " {} <= {} <= {}", v.lower, v.name, u);
            }
            None => {
                let _ = writeln!(out, " {} >= {}", v.name, v.lower);
            }
        }
    }
    out.push_str("General\n");
    for v in &ip.variables {
        let _ = write!(out, " {}", v.name);
    }
    out.push_str("\nEnd\n");
    out
}

fn write_terms(out: &mut String, ip: &IntegerProgram, terms: &[(VarId, f64)]) {
    for &(v, a) in terms {
        let sign = if a < 0.0 { '-' } else { '+' };
        let _ = write!(out, " {} {} {}", sign, a.abs(), ip.variable(v).name);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ip::{LinearConstraint, Relation};

    #[test]
    fn small_program_layout() {
        let mut ip = IntegerProgram::new(Sense::Minimize);
        let x = ip.add_variable("x", 0, Some(4));
        let y = ip.add_variable("y", 1, None);
        ip.add_constraint(LinearConstraint::new("c1[a]", [(x, 1.0), (y, -2.5)], Relation::Ge, 3.0));
        ip.set_objective([(x, 0.4), (y, 2.0)]);
        let expected = "\\ integer program\nMinimize\n obj: + 0.4 x + 2 y\nSubject To\n c1[a]: + 1 x - 2.5 y >= 3\nBounds\n 0 <= x <= 4\n y >= 1\nGeneral\n x y\nEnd\n";
        assert_eq!(to_lp_string(&ip), expected);
    }
}
