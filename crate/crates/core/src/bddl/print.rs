//! Canonical BDDL text. Everything printed here parses back to an equal value.

use std::fmt;

use super::{ActionDef, Condition, CoordBase, CoordExpr, GameDomain, GameInstance, SubCondition};

impl fmt::Display for CoordExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = match self.base {
            CoordBase::VarX => "?x",
            CoordBase::VarY => "?y",
            CoordBase::Const(c) => return write!(f, "{c}"),
            CoordBase::XMin => "xmin",
            CoordBase::XMax => "xmax",
            CoordBase::YMin => "ymin",
            CoordBase::YMax => "ymax",
        };
        match self.offset {
            0 => f.write_str(base),
            k if k > 0 => write!(f, "{base}+{k}"),
            k => write!(f, "{base}-{}", -i64::from(k)),
        }
    }
}

impl fmt::Display for SubCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(
                f,
                "NOT({}({},{}))",
                self.predicate.keyword(),
                self.x,
                self.y
            )
        } else {
            write!(f, "{}({},{})", self.predicate.keyword(), self.x, self.y)
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, sub) in self.subs.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{sub}")?;
        }
        f.write_str(")")
    }
}

fn write_action(f: &mut fmt::Formatter<'_>, a: &ActionDef) -> fmt::Result {
    writeln!(f, ":action {}", a.name)?;
    writeln!(f, ":parameters (?x,?y)")?;
    writeln!(f, ":precondition {}", a.pre)?;
    writeln!(f, ":effect {}", a.eff)
}

impl fmt::Display for GameDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "#blackactions")?;
        for a in &self.black_actions {
            write_action(f, a)?;
        }
        writeln!(f, "#whiteactions")?;
        for a in &self.white_actions {
            write_action(f, a)?;
        }
        Ok(())
    }
}

impl fmt::Display for GameInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "#boardsize")?;
        writeln!(f, "{} {}", self.width, self.height)?;
        writeln!(f, "#init")?;
        f.write_str("(")?;
        for (k, e) in self.init.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}({},{})", e.side, e.x, e.y)?;
        }
        writeln!(f, ")")?;
        writeln!(f, "#depth")?;
        writeln!(f, "{}", self.depth)?;
        writeln!(f, "#blackgoals")?;
        for g in &self.black_goals {
            writeln!(f, "{g}")?;
        }
        writeln!(f, "#whitegoals")?;
        for g in &self.white_goals {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}
