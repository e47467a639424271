// Pattern P4 (inline-func): anonymous functions with goroutines and
// channel communication.
// Expected: no deadlock
package main

import "fmt"

func main() {
	ch := make(chan string)
	go func() {
		ch <- "hello"
	}()
	fmt.Println(<-ch)
}
