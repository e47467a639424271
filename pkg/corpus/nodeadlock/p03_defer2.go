// Pattern P3 (defer2): nested defer calls; the deferred outer function
// defers the receive.
// Expected: no deadlock
package main

import "fmt"

func inner(ch chan int) {
	fmt.Println(<-ch)
}

func outer(ch chan int) {
	defer inner(ch)
	fmt.Println("outer body")
}

func main() {
	ch := make(chan int)
	defer outer(ch)
	go func() {
		ch <- 7
	}()
}
