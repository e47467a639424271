// Pattern P11 (basic-receiveInFunction-extra): like P2 but mis-paired;
// the helper receives twice while only one value is sent.
// Expected: deadlock
package main

import "fmt"

func produce(ch chan int) {
	ch <- 42
}

func consume(ch chan int) {
	fmt.Println(<-ch)
	fmt.Println(<-ch)
}

func main() {
	ch := make(chan int)
	go produce(ch)
	consume(ch)
}
