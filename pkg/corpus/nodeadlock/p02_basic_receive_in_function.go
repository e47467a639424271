// Pattern P2 (basic-receiveInFunction): like P1, but the receive happens
// in a helper function.
// Expected: no deadlock
package main

import "fmt"

func produce(ch chan int) {
	ch <- 42
}

func consume(ch chan int) {
	fmt.Println(<-ch)
}

func main() {
	ch := make(chan int)
	go produce(ch)
	consume(ch)
}
