#pragma once

// Small automata shared by the unit tests.

namespace fixture {

inline const char* kAllA = R"(alphabet: a b
state q priority 0 init
q a -> leaf
q a -> (q,-)
q a -> (-,q)
q a -> (q,q)
)";

// Some b occurs; the search state has priority 1.
inline const char* kSomeB = R"(alphabet: a b
# search for b
state s priority 1 init
state u priority 0
s a -> (s,-)
s a -> (-,s)
s a -> (s,u)
s a -> (u,s)
s b -> leaf
s b -> (u,-)
s b -> (-,u)
s b -> (u,u)
u a -> leaf
u a -> (u,-)
u a -> (-,u)
u a -> (u,u)
u b -> leaf
u b -> (u,-)
u b -> (-,u)
u b -> (u,u)
)";

// Infinitely many b on every infinite branch.
inline const char* kInfB = R"(alphabet: a b
state x priority 1 init
state y priority 0 init
x a -> leaf
x a -> (x,-)
x a -> (-,x)
x a -> (x,x)
x a -> (y,-)
x a -> (-,y)
x a -> (x,y)
x a -> (y,x)
x a -> (y,y)
y b -> leaf
y b -> (x,-)
y b -> (-,x)
y b -> (x,x)
y b -> (y,-)
y b -> (-,y)
y b -> (x,y)
y b -> (y,x)
y b -> (y,y)
)";


// Some infinite branch eventually carries only a.
inline const char* kFinB = R"(alphabet: a b
state x priority 1 init
state y priority 0
state u priority 0
x a -> (x,-)
x a -> (-,x)
x a -> (x,u)
x a -> (u,x)
x b -> (x,-)
x b -> (-,x)
x b -> (x,u)
x b -> (u,x)
x a -> (y,-)
x a -> (-,y)
x a -> (y,u)
x a -> (u,y)
y a -> (y,-)
y a -> (-,y)
y a -> (y,u)
y a -> (u,y)
u a -> leaf
u a -> (u,-)
u a -> (-,u)
u a -> (u,u)
u b -> leaf
u b -> (u,-)
u b -> (-,u)
u b -> (u,u)
)";

}  // namespace fixture
